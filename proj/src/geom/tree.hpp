#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace horolab {

// A freely reduced word over generators of a free group. Entry +k stands for
// the k-th generator (1-based), -k for its inverse.
using Word = std::vector<int32_t>;

bool word_is_reduced(const Word& w);

// Appends a single letter with cancellation.
void word_push(Word& w, int32_t letter);

// Reduced concatenation u * v.
Word word_concat(const Word& u, const Word& v);

Word word_inverse(const Word& w);

size_t common_prefix_length(const Word& u, const Word& v);

// Letters a..z with capitals for inverses; "" is the identity.
std::string word_format(const Word& w);
std::optional<Word> word_parse(const std::string& text, uint32_t rank);

// An eventually periodic infinite reduced word: preperiod followed by the
// period repeated forever. Canonical form has a primitive period and the
// shortest preperiod, so structural equality decides equality of ends.
struct TreeEnd {
  Word pre;
  Word per;

  bool operator==(const TreeEnd& other) const = default;
};

// Validates reducedness (including both seams) and canonicalizes.
std::optional<TreeEnd> make_tree_end(Word pre, Word per);

int32_t tree_end_letter(const TreeEnd& e, size_t index);

// Drops the first n letters.
TreeEnd tree_end_tail(const TreeEnd& e, size_t n);

// Reduced left multiplication g * e.
TreeEnd tree_end_translate(const Word& g, const TreeEnd& e);

// Longest common prefix; nullopt when the ends coincide.
std::optional<size_t> tree_end_common_prefix(const TreeEnd& a, const TreeEnd& b);

size_t tree_end_word_common_prefix(const Word& w, const TreeEnd& e);

std::string tree_end_format(const TreeEnd& e);
std::optional<TreeEnd> tree_end_parse(const std::string& text, uint32_t rank);

// Fixed ends of the translation x -> g x, for g != identity: the attracting
// end lim g^n and the repelling end lim g^-n.
struct TranslationEnds {
  TreeEnd attracting;
  TreeEnd repelling;
};
std::optional<TranslationEnds> word_translation_ends(const Word& g);

}  // namespace horolab
