#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "geom/boundary.hpp"

namespace horolab {

// Exact optimal transport between two discrete distributions given the dense
// cost matrix (row-major, size supply.size() x demand.size()). Successive
// shortest augmenting paths with potentials; every augmentation exhausts a
// supply or demand node, so at most m+n rounds run.
double transport_cost(std::span<const double> supply, std::span<const double> demand,
                      std::span<const double> cost);

struct TreeTransportResult {
  double value = 0.0;           // exact for the depth-truncated cost
  double truncation_bias = 0.0; // cost mass possibly hidden below the truncation depth
};

// Closed-form optimal transport between boundary measures on a tree with cost
// min(1, rho_b)^alpha: the cost is an ultrametric realized by the prefix
// trie, where transport decomposes over edges.
TreeTransportResult tree_boundary_transport(std::span<const TreeEnd> a_atoms,
                                            std::span<const double> a_weights,
                                            std::span<const TreeEnd> b_atoms,
                                            std::span<const double> b_weights, double base,
                                            double alpha, size_t depth);

}  // namespace horolab
