#include "geom/tree.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace horolab {

bool word_is_reduced(const Word& w) {
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] == -w[i + 1]) return false;
  for (int32_t x : w)
    if (x == 0) return false;
  return true;
}

void word_push(Word& w, int32_t letter) {
  if (!w.empty() && w.back() == -letter)
    w.pop_back();
  else
    w.push_back(letter);
}

Word word_concat(const Word& u, const Word& v) {
  Word out = u;
  out.reserve(u.size() + v.size());
  for (int32_t x : v) word_push(out, x);
  return out;
}

Word word_inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
  return out;
}

size_t common_prefix_length(const Word& u, const Word& v) {
  size_t n = std::min(u.size(), v.size());
  size_t i = 0;
  while (i < n && u[i] == v[i]) ++i;
  return i;
}

std::string word_format(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (int32_t x : w) {
    int32_t k = x > 0 ? x : -x;
    char c = static_cast<char>('a' + (k - 1));
    s.push_back(x > 0 ? c : static_cast<char>(std::toupper(c)));
  }
  return s;
}

std::optional<Word> word_parse(const std::string& text, uint32_t rank) {
  Word w;
  w.reserve(text.size());
  for (char c : text) {
    int32_t letter;
    if (c >= 'a' && c <= 'z')
      letter = 1 + (c - 'a');
    else if (c >= 'A' && c <= 'Z')
      letter = -(1 + (c - 'A'));
    else
      return std::nullopt;
    if (static_cast<uint32_t>(letter > 0 ? letter : -letter) > rank) return std::nullopt;
    w.push_back(letter);
  }
  if (!word_is_reduced(w)) return std::nullopt;
  return w;
}

namespace {

Word rotate_left(const Word& w, size_t n) {
  Word out;
  out.reserve(w.size());
  for (size_t i = 0; i < w.size(); ++i) out.push_back(w[(i + n) % w.size()]);
  return out;
}

// Shortest word whose repetition produces w.
Word primitive_period(const Word& w) {
  for (size_t d = 1; d <= w.size(); ++d) {
    if (w.size() % d != 0) continue;
    bool ok = true;
    for (size_t i = d; i < w.size() && ok; ++i) ok = w[i] == w[i - d];
    if (ok) return Word(w.begin(), w.begin() + static_cast<long>(d));
  }
  return w;
}

}  // namespace

std::optional<TreeEnd> make_tree_end(Word pre, Word per) {
  if (per.empty()) return std::nullopt;
  if (!word_is_reduced(pre) || !word_is_reduced(per)) return std::nullopt;
  if (per.back() == -per.front()) return std::nullopt;             // period seam
  if (!pre.empty() && pre.back() == -per.front()) return std::nullopt;  // join seam

  per = primitive_period(per);
  // Absorb a preperiod tail that merely repeats the period backwards.
  while (!pre.empty() && pre.back() == per.back()) {
    pre.pop_back();
    std::rotate(per.rbegin(), per.rbegin() + 1, per.rend());
  }
  return TreeEnd{std::move(pre), std::move(per)};
}

int32_t tree_end_letter(const TreeEnd& e, size_t index) {
  if (index < e.pre.size()) return e.pre[index];
  return e.per[(index - e.pre.size()) % e.per.size()];
}

TreeEnd tree_end_tail(const TreeEnd& e, size_t n) {
  if (n <= e.pre.size()) {
    Word pre(e.pre.begin() + static_cast<long>(n), e.pre.end());
    return *make_tree_end(std::move(pre), e.per);
  }
  size_t shift = (n - e.pre.size()) % e.per.size();
  return *make_tree_end({}, rotate_left(e.per, shift));
}

TreeEnd tree_end_translate(const Word& g, const TreeEnd& e) {
  size_t eaten = 0;
  size_t keep = g.size();
  while (keep > 0 && g[keep - 1] == -tree_end_letter(e, eaten)) {
    --keep;
    ++eaten;
  }
  TreeEnd tail = tree_end_tail(e, eaten);
  Word pre(g.begin(), g.begin() + static_cast<long>(keep));
  pre.insert(pre.end(), tail.pre.begin(), tail.pre.end());
  return *make_tree_end(std::move(pre), tail.per);
}

std::optional<size_t> tree_end_common_prefix(const TreeEnd& a, const TreeEnd& b) {
  if (a == b) return std::nullopt;
  size_t bound = std::max(a.pre.size(), b.pre.size()) +
                 std::lcm(a.per.size(), b.per.size()) + 1;
  for (size_t i = 0; i < bound; ++i)
    if (tree_end_letter(a, i) != tree_end_letter(b, i)) return i;
  // Canonical ends that agree this far are equal.
  return std::nullopt;
}

size_t tree_end_word_common_prefix(const Word& w, const TreeEnd& e) {
  size_t i = 0;
  while (i < w.size() && w[i] == tree_end_letter(e, i)) ++i;
  return i;
}

std::string tree_end_format(const TreeEnd& e) {
  return word_format(e.pre) + "(" + word_format(e.per) + ")";
}

std::optional<TreeEnd> tree_end_parse(const std::string& text, uint32_t rank) {
  auto open = text.find('(');
  auto close = text.find(')');
  if (open == std::string::npos || close != text.size() - 1 || close <= open + 1)
    return std::nullopt;
  auto pre = word_parse(text.substr(0, open), rank);
  auto per = word_parse(text.substr(open + 1, close - open - 1), rank);
  if (!pre || !per) return std::nullopt;
  return make_tree_end(std::move(*pre), std::move(*per));
}

std::optional<TranslationEnds> word_translation_ends(const Word& g) {
  if (g.empty()) return std::nullopt;
  // Cyclic reduction g = u v u^-1 with v cyclically reduced.
  Word u;
  Word v = g;
  while (v.size() >= 2 && v.front() == -v.back()) {
    u.push_back(v.front());
    v.erase(v.begin());
    v.pop_back();
  }
  if (v.empty()) return std::nullopt;  // should not happen for reduced g
  TranslationEnds ends;
  ends.attracting = tree_end_translate(u, *make_tree_end({}, v));
  ends.repelling = tree_end_translate(u, *make_tree_end({}, word_inverse(v)));
  return ends;
}

}  // namespace horolab
