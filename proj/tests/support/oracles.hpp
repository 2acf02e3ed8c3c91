// Independent oracles used to freeze expected values; they deliberately avoid
// the implementation paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "geom/boundary.hpp"
#include "geom/tree.hpp"

namespace horolab::oracles {

// Free reduction by repeated full scans.
inline Word naive_reduce(Word w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == -w[i + 1]) {
        w.erase(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return w;
}

inline Word naive_concat(const Word& u, const Word& v) {
  Word joined = u;
  joined.insert(joined.end(), v.begin(), v.end());
  return naive_reduce(joined);
}

// Word metric d(u, v) = |u^-1 v| via naive reduction.
inline double naive_tree_distance(const Word& u, const Word& v) {
  Word inv;
  for (auto it = u.rbegin(); it != u.rend(); ++it) inv.push_back(-*it);
  return static_cast<double>(naive_concat(inv, v).size());
}

// liminf over truncations of the extended Gromov product of two ends.
inline double truncated_end_product(const SpaceModel& s, const TreeEnd& a, const TreeEnd& b,
                                    size_t depth) {
  Word wa, wb;
  for (size_t i = 0; i < depth; ++i) {
    wa.push_back(tree_end_letter(a, i));
    wb.push_back(tree_end_letter(b, i));
  }
  double best = 1e300;
  for (size_t n = depth / 2; n <= depth; ++n) {
    Word ua(wa.begin(), wa.begin() + static_cast<long>(n));
    Word ub(wb.begin(), wb.begin() + static_cast<long>(n));
    double product = 0.5 * (static_cast<double>(ua.size()) + static_cast<double>(ub.size()) -
                            naive_tree_distance(ua, ub));
    best = std::min(best, product);
  }
  return best;
}

// Shortest chain between two members of a small net, all simple paths.
inline double brute_force_chain(const SpaceModel& s, const VisualConfig& vc,
                                std::span<const BordPoint> net, size_t from, size_t to) {
  size_t n = net.size();
  std::vector<std::vector<double>> rho(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j) rho[i][j] = visual_quasimetric(s, vc, net[i], net[j], s.basepoint);
  double best = rho[from][to];
  std::vector<size_t> middle;
  for (size_t i = 0; i < n; ++i)
    if (i != from && i != to) middle.push_back(i);
  std::sort(middle.begin(), middle.end());
  // every subset, every order of intermediate points
  for (size_t mask = 1; mask < (1u << middle.size()); ++mask) {
    std::vector<size_t> chosen;
    for (size_t b = 0; b < middle.size(); ++b)
      if (mask & (1u << b)) chosen.push_back(middle[b]);
    std::sort(chosen.begin(), chosen.end());
    do {
      double total = rho[from][chosen.front()];
      for (size_t i = 0; i + 1 < chosen.size(); ++i) total += rho[chosen[i]][chosen[i + 1]];
      total += rho[chosen.back()][to];
      best = std::min(best, total);
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  }
  return best;
}

// Arc length of the vertical segment between i h0 and i h1: integral of dy/y.
inline double vertical_geodesic_length(double y0, double y1, size_t panels = 1 << 16) {
  double a = std::min(y0, y1), b = std::max(y0, y1);
  double h = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (size_t k = 0; k < panels; ++k) {
    double lo = a + h * static_cast<double>(k);
    total += h / 6.0 * (1.0 / lo + 4.0 / (lo + h / 2.0) + 1.0 / (lo + h));
  }
  return total;
}

// Exact E[d(w^n x0, x0)] for the uniform walk on F_r: the word length is a
// birth-death chain with up-probability (2r-1)/2r off the root.
inline double birth_death_mean_displacement(uint32_t rank, uint32_t steps) {
  double up = static_cast<double>(2 * rank - 1) / static_cast<double>(2 * rank);
  std::vector<double> p(steps + 2, 0.0);
  p[0] = 1.0;
  for (uint32_t t = 0; t < steps; ++t) {
    std::vector<double> q(steps + 2, 0.0);
    for (uint32_t k = 0; k + 1 <= steps + 1; ++k) {
      if (p[k] == 0.0) continue;
      if (k == 0) {
        q[1] += p[0];
      } else {
        q[k + 1] += p[k] * up;
        q[k - 1] += p[k] * (1.0 - up);
      }
    }
    p = std::move(q);
  }
  double mean = 0.0;
  for (size_t k = 0; k < p.size(); ++k) mean += static_cast<double>(k) * p[k];
  return mean;
}

// Optimal assignment by permutation enumeration (uniform marginals).
inline double brute_force_assignment(const std::vector<std::vector<double>>& cost) {
  size_t n = cost.size();
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) total += cost[i][perm[i]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(n);
}

}  // namespace horolab::oracles
