#include "resetgeo/decomposition.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace resetgeo {

StochasticMap primitive_matrix(const PrimitiveOp& op) {
  if (op.dim < 2) throw Error(ErrorCode::OutOfRange, "primitive dimension must be at least 2");
  if (op.m < 0 || op.n < 0 || op.m >= op.dim || op.n >= op.dim || op.m == op.n) {
    throw Error(ErrorCode::OutOfRange, "primitive states must be distinct and in range");
  }
  if (op.alpha < 0.0 || op.alpha > 1.0 || op.beta < 0.0 || op.beta > 1.0) {
    throw Error(ErrorCode::OutOfRange, "mixing rates must lie in [0, 1]");
  }
  Matrix T = Matrix::Identity(op.dim, op.dim);
  T(op.m, op.m) = 1.0 - op.alpha;
  T(op.n, op.m) = op.alpha;
  T(op.m, op.n) = op.beta;
  T(op.n, op.n) = 1.0 - op.beta;
  return StochasticMap{op.dim, std::move(T)};
}

StochasticMap compose_sequence(const OpSequence& seq) {
  Matrix acc = Matrix::Identity(seq.dim, seq.dim);
  for (const auto& op : seq.ops) {
    if (op.dim != seq.dim) throw Error(ErrorCode::DimMismatch, "primitive dim differs from sequence dim");
    acc = primitive_matrix(op).entries * acc;  // ops[0] applied first
  }
  return StochasticMap{seq.dim, std::move(acc)};
}

Obstruction det_obstruction(const StochasticMap& T) {
  return T.entries.determinant() < -1e-12 ? Obstruction::Blocked : Obstruction::Inconclusive;
}

namespace {

struct SearchGrid {
  std::vector<double> values;                       // 0, step, ..., 1
  std::vector<std::pair<int, int>> pairs;           // m < n
  std::vector<std::pair<double, double>> factors;   // non-identity (alpha, beta) combos
  bool filtered = false;
};

double residual_of(const Matrix& q, const Matrix& t) {
  return (q - t).cwiseAbs().maxCoeff();
}

// every extension of q keeps output columns inside the bounding box of q's
// columns (they are convex combinations), so no descendant can beat this
double prune_bound(const Matrix& q, const Matrix& t) {
  const int d = static_cast<int>(q.rows());
  double lb = 0.0;
  for (int k = 0; k < d; ++k) {
    const double lo = q.row(k).minCoeff();
    const double hi = q.row(k).maxCoeff();
    double worst_row = 0.0;
    for (int c = 0; c < d; ++c) {
      const double x = t(k, c);
      const double dist = x < lo ? lo - x : (x > hi ? x - hi : 0.0);
      worst_row = std::max(worst_row, dist);
    }
    // max over columns of per-row distance bounds column-wise infinity norms:
    // each column's deviation in row k is at least dist(t(k,c), [lo,hi])
    lb = std::max(lb, worst_row);
  }
  return lb;
}

struct SearchState {
  const Matrix* target = nullptr;
  const SearchGrid* grid = nullptr;
  std::atomic<double>* best = nullptr;
  std::atomic<std::int64_t>* nodes = nullptr;
  OpSequence* best_seq = nullptr;      // guarded by best_mutex in parallel mode
  std::vector<PrimitiveOp> stack;
  int dim = 0;

  void record(double value, const std::vector<PrimitiveOp>& seq_reversed) {
    if (best_seq) {
      // sequential mode: single thread owns best
      if (value < best->load(std::memory_order_relaxed)) {
        best->store(value, std::memory_order_relaxed);
        best_seq->ops.assign(seq_reversed.rbegin(), seq_reversed.rend());
      }
    } else {
      double cur = best->load();
      while (value < cur && !best->compare_exchange_weak(cur, value)) {
      }
    }
  }
};

// closed-form last level: right-multiplication only remixes columns m and n,
// and the max-norm residual separates into an alpha part and a beta part
void scan_leaf_level(const Matrix& q, SearchState& st) {
  const Matrix& t = *st.target;
  const int d = st.dim;
  const auto& values = st.grid->values;
  const int nv = static_cast<int>(values.size());
  std::vector<double> hm(nv), hn(nv);

  for (const auto& [m, n] : st.grid->pairs) {
    double fixed = 0.0;
    for (int c = 0; c < d; ++c) {
      if (c == m || c == n) continue;
      fixed = std::max(fixed, (q.col(c) - t.col(c)).cwiseAbs().maxCoeff());
    }
    for (int i = 0; i < nv; ++i) {
      const double a = values[i];
      hm[i] = ((1.0 - a) * q.col(m) + a * q.col(n) - t.col(m)).cwiseAbs().maxCoeff();
      hn[i] = (a * q.col(m) + (1.0 - a) * q.col(n) - t.col(n)).cwiseAbs().maxCoeff();
    }
    st.nodes->fetch_add(static_cast<std::int64_t>(nv) * nv, std::memory_order_relaxed);

    if (!st.grid->filtered) {
      int bi = 0, bj = 0;
      for (int i = 1; i < nv; ++i) {
        if (hm[i] < hm[bi]) bi = i;
        if (hn[i] < hn[bj]) bj = i;
      }
      const double value = std::max({fixed, hm[bi], hn[bj]});
      if (value < st.best->load()) {
        st.stack.push_back(PrimitiveOp{d, m, n, values[bi], values[bj]});
        st.record(value, st.stack);
        st.stack.pop_back();
      }
    } else {
      for (int i = 0; i < nv; ++i) {
        for (int j = 0; j < nv; ++j) {
          if (values[i] + values[j] > 1.0 + 1e-12) continue;
          const double value = std::max({fixed, hm[i], hn[j]});
          if (value < st.best->load()) {
            st.stack.push_back(PrimitiveOp{d, m, n, values[i], values[j]});
            st.record(value, st.stack);
            st.stack.pop_back();
          }
        }
      }
    }
  }
}

void dfs(const Matrix& q, int remaining, SearchState& st) {
  if (st.best->load() <= 0.0) return;  // exact decomposition already found
  if (prune_bound(q, *st.target) >= st.best->load()) return;
  if (remaining == 0) return;
  if (remaining == 1) {
    scan_leaf_level(q, st);
    return;
  }
  const int d = st.dim;
  Matrix child = q;
  for (const auto& [m, n] : st.grid->pairs) {
    for (const auto& [a, b] : st.grid->factors) {
      child.col(m) = (1.0 - a) * q.col(m) + a * q.col(n);
      child.col(n) = b * q.col(m) + (1.0 - b) * q.col(n);
      st.nodes->fetch_add(1, std::memory_order_relaxed);
      st.stack.push_back(PrimitiveOp{d, m, n, a, b});
      st.record(residual_of(child, *st.target), st.stack);
      dfs(child, remaining - 1, st);
      st.stack.pop_back();
    }
    child.col(m) = q.col(m);
    child.col(n) = q.col(n);
  }
}

}  // namespace

SearchResult residual_search(const StochasticMap& T, int depth, double grid,
                             bool filter_alpha_beta_sum, std::int64_t node_budget,
                             bool parallel) {
  if (depth < 0 || depth > 5) throw Error(ErrorCode::OutOfRange, "search depth must lie in [0, 5]");
  if (grid < 0.05 || grid > 1.0) throw Error(ErrorCode::OutOfRange, "grid step must lie in [0.05, 1]");
  const int d = T.dim;

  SearchGrid g;
  g.filtered = filter_alpha_beta_sum;
  const int steps = static_cast<int>(std::floor(1.0 / grid + 1e-9));
  for (int i = 0; i <= steps; ++i) g.values.push_back(i * grid);
  if (g.values.back() < 1.0 - 1e-12) g.values.push_back(1.0);  // swap corner always present
  for (int m = 0; m < d; ++m)
    for (int n = m + 1; n < d; ++n) g.pairs.emplace_back(m, n);
  for (double a : g.values) {
    for (double b : g.values) {
      if (a == 0.0 && b == 0.0) continue;  // identity factor adds nothing at interior levels
      if (g.filtered && a + b > 1.0 + 1e-12) continue;
      g.factors.emplace_back(a, b);
    }
  }

  // budget guard on interior (expanded) nodes; leaves are handled by the
  // closed-form scan and never materialized
  const double branching = static_cast<double>(g.pairs.size()) * g.factors.size();
  double estimate = 1.0;
  double level = 1.0;
  for (int j = 1; j < depth; ++j) {
    level *= branching;
    estimate += level;
  }
  if (estimate > static_cast<double>(node_budget)) {
    throw Error(ErrorCode::BudgetExceeded,
                "estimated node count " + std::to_string(estimate) + " exceeds budget");
  }

  std::atomic<double> best{residual_of(Matrix::Identity(d, d), T.entries)};
  std::atomic<std::int64_t> nodes{1};
  SearchResult result;
  result.best.dim = d;

  if (depth == 0) {
    result.residual = best.load();
    result.nodes_visited = nodes.load();
    return result;
  }

  if (!parallel || depth < 2) {
    SearchState st;
    st.target = &T.entries;
    st.grid = &g;
    st.best = &best;
    st.nodes = &nodes;
    st.best_seq = &result.best;
    st.dim = d;
    dfs(Matrix::Identity(d, d), depth, st);
  } else {
    // branch-parallel variant: identical residual, order-independent
    const int n_branch = static_cast<int>(g.pairs.size() * g.factors.size());
    const Matrix identity = Matrix::Identity(d, d);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int br = 0; br < n_branch; ++br) {
      const auto& [m, n] = g.pairs[br / g.factors.size()];
      const auto& [a, b] = g.factors[br % g.factors.size()];
      Matrix child = identity;
      child.col(m) = (1.0 - a) * identity.col(m) + a * identity.col(n);
      child.col(n) = b * identity.col(m) + (1.0 - b) * identity.col(n);
      nodes.fetch_add(1, std::memory_order_relaxed);
      SearchState st;
      st.target = &T.entries;
      st.grid = &g;
      st.best = &best;
      st.nodes = &nodes;
      st.best_seq = nullptr;  // sequence reporting skipped in parallel mode
      st.dim = d;
      st.stack.push_back(PrimitiveOp{d, m, n, a, b});
      st.record(residual_of(child, T.entries), st.stack);
      dfs(child, depth - 1, st);
    }
  }

  result.residual = best.load();
  result.nodes_visited = nodes.load();
  return result;
}

}  // namespace resetgeo
