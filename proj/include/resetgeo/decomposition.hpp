#pragma once

// Primitive two-state operations, sequence composition, the determinant
// obstruction to decomposability, and a bounded grid search for the best
// approximate decomposition.

#include <cstdint>
#include <vector>

#include "resetgeo/core_maps.hpp"

namespace resetgeo {

struct PrimitiveOp {
  int dim = 2;
  int m = 0;      // first state, 0-based
  int n = 1;      // second state, m != n
  double alpha = 0.0;  // leak m <- n ... column m: [1-alpha; alpha]
  double beta = 0.0;   // column n: [beta; 1-beta]
};

struct OpSequence {
  int dim = 2;
  std::vector<PrimitiveOp> ops;  // applied in order, ops[0] first (rightmost factor)
};

enum class Obstruction { Blocked, Inconclusive };

struct SearchResult {
  double residual = 0.0;        // min over sequences of ||product - T||_max
  std::int64_t nodes_visited = 0;
  OpSequence best;
};

// 2x2 block [[1-alpha, beta], [alpha, 1-beta]] on rows/cols (m, n), identity
// elsewhere; det = 1 - alpha - beta.
StochasticMap primitive_matrix(const PrimitiveOp& op);

StochasticMap compose_sequence(const OpSequence& seq);

// Blocked when det(T) < -1e-12: products of primitives with alpha + beta <= 1
// all have nonnegative determinant, so such a T cannot be reached. Positive
// determinant proves nothing (counterexamples exist), hence Inconclusive.
Obstruction det_obstruction(const StochasticMap& T);

// Depth-limited DFS over sequences of grid primitives (alpha, beta on
// {0, step, 2 step, ..., 1}, identity excluded at interior levels, the swap
// corner (1,1) always included). Residuals are taken at every node so all
// shorter sequences are covered. The last level is scanned in closed form:
// right-multiplying by a primitive only mixes columns m and n, and the max-norm
// residual separates in alpha and beta. Pruning: any extension of Q keeps each
// output column inside the per-coordinate bounding box of Q's columns.
//
// Budget guard: estimated interior node count sum_{j<depth} b^j with
// b = n_pairs (n_vals^2 - 1) must not exceed node_budget (default 1e8).
SearchResult residual_search(const StochasticMap& T, int depth, double grid,
                             bool filter_alpha_beta_sum = false,
                             std::int64_t node_budget = 100000000,
                             bool parallel = false);

}  // namespace resetgeo
