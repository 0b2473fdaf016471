#pragma once

// Brute-force references for the transportation solver. Small sizes only.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "semsim/transport.hpp"

namespace semsim::oracle {

// Minimum cost over every vertex of the transportation polytope. Each vertex
// is the unique solution supported on some spanning tree of the m x n
// bipartite graph, so enumerate trees of m + n - 1 cells and keep the
// nonnegative ones.
inline double vertex_enumeration_optimum(const TransportProblem& p) {
  const std::size_t m = p.supply.size(), n = p.demand.size(), cells = m * n, k = m + n - 1;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(cells, 0);
  std::fill(pick.end() - static_cast<std::ptrdiff_t>(k), pick.end(), 1);
  do {
    std::vector<std::size_t> chosen;
    for (std::size_t c = 0; c < cells; ++c)
      if (pick[c]) chosen.push_back(c);

    std::vector<std::size_t> parent(m + n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool tree = true;
    for (auto c : chosen) {
      const auto a = find(c / n), b = find(m + c % n);
      if (a == b) {
        tree = false;
        break;
      }
      parent[a] = b;
    }
    if (!tree) continue;

    std::vector<double> residual(m + n);
    for (std::size_t i = 0; i < m; ++i) residual[i] = p.supply[i];
    for (std::size_t j = 0; j < n; ++j) residual[m + j] = p.demand[j];
    std::vector<bool> done(chosen.size(), false);
    std::vector<double> flow(chosen.size(), 0.0);
    for (std::size_t round = 0; round < chosen.size(); ++round) {
      std::vector<std::size_t> degree(m + n, 0);
      for (std::size_t e = 0; e < chosen.size(); ++e)
        if (!done[e]) {
          ++degree[chosen[e] / n];
          ++degree[m + chosen[e] % n];
        }
      for (std::size_t e = 0; e < chosen.size(); ++e) {
        if (done[e]) continue;
        const std::size_t r = chosen[e] / n, c = m + chosen[e] % n;
        const std::size_t leaf = degree[r] == 1 ? r : (degree[c] == 1 ? c : m + n);
        if (leaf == m + n) continue;
        const std::size_t other = leaf == r ? c : r;
        flow[e] = residual[leaf];
        residual[other] -= flow[e];
        residual[leaf] = 0.0;
        done[e] = true;
        break;
      }
    }
    bool feasible = true;
    double cost = 0.0;
    for (std::size_t e = 0; e < chosen.size(); ++e) {
      if (flow[e] < -1e-12) feasible = false;
      cost += flow[e] * p.cost(chosen[e] / n, chosen[e] % n);
    }
    if (feasible) best = std::min(best, cost);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

// Uniform n-to-n instance: the optimum equals the cheapest perfect matching over n.
inline double matching_optimum(const Matrix& cost) {
  const std::size_t n = cost.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += cost(i, perm[i]);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(n);
}

inline std::vector<double> random_marginal(std::mt19937_64& gen, std::size_t size, bool allow_zero) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(size);
  double total = 0.0;
  for (auto& x : w) {
    x = (allow_zero && u(gen) < 0.2) ? 0.0 : u(gen);
    total += x;
  }
  if (total == 0.0) {
    w[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : w) x /= total;
  return w;
}

inline TransportProblem random_problem(std::mt19937_64& gen, std::size_t max_side = 4) {
  std::uniform_int_distribution<std::size_t> side(1, max_side);
  std::uniform_real_distribution<double> c(0.0, 10.0);
  std::uniform_int_distribution<int> small(0, 4);
  TransportProblem p;
  const bool integral = gen() % 3 == 0;  // integer costs make ties and degenerate pivots likely
  p.supply = random_marginal(gen, side(gen), true);
  p.demand = random_marginal(gen, side(gen), true);
  p.cost = Matrix(p.supply.size(), p.demand.size());
  for (std::size_t i = 0; i < p.supply.size(); ++i)
    for (std::size_t j = 0; j < p.demand.size(); ++j) p.cost(i, j) = integral ? small(gen) : c(gen);
  return p;
}

// Uniform marginals over n points with Euclidean cost between random planar points.
inline TransportProblem random_uniform_metric_problem(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::vector<std::pair<double, double>> xs(n), ys(n);
  for (auto& q : xs) q = {coord(gen), coord(gen)};
  for (auto& q : ys) q = {coord(gen), coord(gen)};
  TransportProblem p;
  p.supply.assign(n, 1.0 / static_cast<double>(n));
  p.demand = p.supply;
  p.cost = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p.cost(i, j) = std::hypot(xs[i].first - ys[j].first, xs[i].second - ys[j].second);
  return p;
}

}  // namespace semsim::oracle
