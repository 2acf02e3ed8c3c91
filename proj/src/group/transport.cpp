#include "group/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "core/error.hpp"

namespace horolab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassEps = 1e-13;
}  // namespace

double transport_cost(std::span<const double> supply, std::span<const double> demand,
                      std::span<const double> cost) {
  const size_t m = supply.size();
  const size_t n = demand.size();
  require(m > 0 && n > 0, Errc::invalid_measure, "transport needs nonempty marginals");
  require(cost.size() == m * n, Errc::invalid_measure, "cost matrix size mismatch");

  std::vector<double> rest_a(supply.begin(), supply.end());
  std::vector<double> rest_b(demand.begin(), demand.end());
  std::vector<double> flow(m * n, 0.0);
  // Node potentials: reduced costs are c_ij + pa[i] - pb[j] >= 0, zero on flow arcs.
  std::vector<double> pa(m, 0.0), pb(n, 0.0);
  for (size_t j = 0; j < n; ++j) {
    double best = kInf;
    for (size_t i = 0; i < m; ++i) best = std::min(best, cost[i * n + j]);
    pb[j] = best;
  }

  double total_left = 0.0;
  for (double a : rest_a) total_left += a;

  while (total_left > kMassEps) {
    std::vector<double> da(m, kInf), db(n, kInf);
    std::vector<int> from_b(n, -1);  // source that relaxed this sink (forward arc)
    std::vector<int> from_a(m, -1);  // sink that relaxed this source (reverse arc)
    std::vector<bool> fin_a(m, false), fin_b(n, false);
    for (size_t i = 0; i < m; ++i)
      if (rest_a[i] > kMassEps) da[i] = 0.0;

    int sink = -1;
    double sink_dist = kInf;
    for (;;) {
      double best = kInf;
      int node = -1;
      bool on_a = true;
      for (size_t i = 0; i < m; ++i)
        if (!fin_a[i] && da[i] < best) {
          best = da[i];
          node = static_cast<int>(i);
          on_a = true;
        }
      for (size_t j = 0; j < n; ++j)
        if (!fin_b[j] && db[j] < best) {
          best = db[j];
          node = static_cast<int>(j);
          on_a = false;
        }
      if (node < 0) break;
      if (on_a) {
        size_t i = static_cast<size_t>(node);
        fin_a[i] = true;
        for (size_t j = 0; j < n; ++j) {
          if (fin_b[j]) continue;
          double rc = cost[i * n + j] + pa[i] - pb[j];
          if (rc < 0.0) rc = 0.0;
          if (da[i] + rc < db[j]) {
            db[j] = da[i] + rc;
            from_b[j] = static_cast<int>(i);
          }
        }
      } else {
        size_t j = static_cast<size_t>(node);
        fin_b[j] = true;
        if (rest_b[j] > kMassEps) {
          sink = static_cast<int>(j);
          sink_dist = db[j];
          break;
        }
        for (size_t i = 0; i < m; ++i) {
          if (fin_a[i] || flow[i * n + j] <= kMassEps) continue;
          double rc = pb[j] - pa[i] - cost[i * n + j];
          if (rc < 0.0) rc = 0.0;
          if (db[j] + rc < da[i]) {
            da[i] = db[j] + rc;
            from_a[i] = static_cast<int>(j);
          }
        }
      }
    }
    require(sink >= 0, Errc::invalid_measure, "transport: marginals do not balance");

    for (size_t i = 0; i < m; ++i) pa[i] += std::min(da[i], sink_dist);
    for (size_t j = 0; j < n; ++j) pb[j] += std::min(db[j], sink_dist);

    // Bottleneck along the augmenting path.
    double push = rest_b[static_cast<size_t>(sink)];
    for (int j = sink;;) {
      int i = from_b[static_cast<size_t>(j)];
      if (from_a[static_cast<size_t>(i)] < 0) {
        push = std::min(push, rest_a[static_cast<size_t>(i)]);
        break;
      }
      int jj = from_a[static_cast<size_t>(i)];
      push = std::min(push, flow[static_cast<size_t>(i) * n + static_cast<size_t>(jj)]);
      j = jj;
    }
    // Apply it.
    for (int j = sink;;) {
      int i = from_b[static_cast<size_t>(j)];
      flow[static_cast<size_t>(i) * n + static_cast<size_t>(j)] += push;
      if (from_a[static_cast<size_t>(i)] < 0) {
        rest_a[static_cast<size_t>(i)] -= push;
        break;
      }
      int jj = from_a[static_cast<size_t>(i)];
      flow[static_cast<size_t>(i) * n + static_cast<size_t>(jj)] -= push;
      j = jj;
    }
    rest_b[static_cast<size_t>(sink)] -= push;
    total_left -= push;
  }

  double value = 0.0;
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < n; ++j) value += flow[i * n + j] * cost[i * n + j];
  return value;
}

namespace {

struct TrieNode {
  std::map<int32_t, size_t> children;
  double mass_a = 0.0;
  double mass_b = 0.0;
};

}  // namespace

TreeTransportResult tree_boundary_transport(std::span<const TreeEnd> a_atoms,
                                            std::span<const double> a_weights,
                                            std::span<const TreeEnd> b_atoms,
                                            std::span<const double> b_weights, double base,
                                            double alpha, size_t depth) {
  std::vector<TrieNode> trie(1);
  auto insert = [&](const TreeEnd& e, double w, bool side_a) {
    size_t node = 0;
    for (size_t d = 0; d < depth; ++d) {
      int32_t letter = tree_end_letter(e, d);
      auto it = trie[node].children.find(letter);
      if (it == trie[node].children.end()) {
        trie.push_back(TrieNode{});
        it = trie[node].children.emplace(letter, trie.size() - 1).first;
      }
      node = it->second;
      if (side_a)
        trie[node].mass_a += w;
      else
        trie[node].mass_b += w;
    }
  };
  for (size_t i = 0; i < a_atoms.size(); ++i) insert(a_atoms[i], a_weights[i], true);
  for (size_t i = 0; i < b_atoms.size(); ++i) insert(b_atoms[i], b_weights[i], false);

  // cost(cpl = t) = b^{-alpha t} is an ultrametric realized by the prefix
  // trie with edge length (f(d-1) - f(d))/2 into depth d; optimal transport
  // on a tree decomposes as sum over edges of length times subtree imbalance.
  auto f = [&](size_t t) { return std::pow(base, -alpha * static_cast<double>(t)); };

  double value = 0.0;
  struct Frame {
    size_t node;
    size_t depth;
  };
  std::vector<Frame> stack{{0, 0}};
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    if (fr.depth >= 1) {
      double imbalance = std::abs(trie[fr.node].mass_a - trie[fr.node].mass_b);
      value += imbalance * 0.5 * (f(fr.depth - 1) - f(fr.depth));
    }
    for (const auto& [letter, child] : trie[fr.node].children)
      stack.push_back({child, fr.depth + 1});
  }

  TreeTransportResult r;
  r.value = value;
  r.truncation_bias = f(depth);
  return r;
}

}  // namespace horolab
