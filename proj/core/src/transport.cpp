#include "semsim/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <numeric>
#include <string>

#include "semsim/error.hpp"

namespace semsim {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw Error("matrix data size does not match its shape");
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

void TransportProblem::validate() const {
  if (supply.empty() || demand.empty()) throw Error("transport problem needs non-empty supply and demand");
  if (cost.rows() != supply.size() || cost.cols() != demand.size())
    throw Error("cost matrix is " + std::to_string(cost.rows()) + "x" + std::to_string(cost.cols()) + ", expected " +
                std::to_string(supply.size()) + "x" + std::to_string(demand.size()));
  auto check_mass = [](const std::vector<double>& w, const char* what) {
    double total = 0.0;
    for (double x : w) {
      if (!std::isfinite(x) || x < 0.0) throw Error(std::string(what) + " must be finite and nonnegative");
      total += x;
    }
    if (std::abs(total - 1.0) > kBalanceTolerance)
      throw Error(std::string(what) + " sums to " + std::to_string(total) + ", expected 1");
  };
  check_mass(supply, "supply");
  check_mass(demand, "demand");
  for (double c : cost.data())
    if (!std::isfinite(c) || c < 0.0) throw Error("cost entries must be finite and nonnegative");
}

namespace {

// Sum of doubles rounded once (Shewchuk's partials, as in Python's math.fsum).
class ExactSum {
 public:
  void add(double x) {
    std::size_t i = 0;
    for (double y : partials_) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[i++] = lo;
      x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
  }

  // a * b without rounding error: the product splits exactly into p + fma(a, b, -p).
  void add_product(double a, double b) {
    const double p = a * b;
    add(p);
    add(std::fma(a, b, -p));
  }

  double value() const {
    if (partials_.empty()) return 0.0;
    std::size_t n = partials_.size() - 1;
    double hi = partials_[n], lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      lo = y - (hi - x);
      if (lo != 0.0) break;
    }
    // Round half to even when the remaining partials push past a tie.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

class TransportSimplex {
 public:
  TransportSimplex(std::vector<double> supply, std::vector<double> demand, Matrix cost)
      : m_(supply.size()), n_(demand.size()), supply_(std::move(supply)), demand_(std::move(demand)),
        cost_(std::move(cost)), flow_(m_, n_), basic_(m_ * n_, false) {
    double max_cost = 0.0;
    for (double c : cost_.data()) max_cost = std::max(max_cost, c);
    eps_ = 1e-12 * std::max(1.0, max_cost);
  }

  struct Cell {
    std::size_t i, j;
  };

  void solve() {
    north_west_corner();
    const std::size_t max_pivots = 50 * (m_ + n_) * (m_ + n_) + 1000;
    for (std::size_t pivots = 0;; ++pivots) {
      if (pivots > max_pivots) throw Error("transport simplex did not converge");
      build_adjacency();
      compute_potentials();
      const auto entering = find_entering();
      if (!entering) break;
      pivot(*entering);
    }
  }

  const std::vector<Cell>& basis() const noexcept { return basis_; }

 private:
  std::size_t m_, n_;
  std::vector<double> supply_, demand_;
  Matrix cost_;
  Matrix flow_;
  std::vector<bool> basic_;
  std::vector<Cell> basis_;
  std::vector<double> u_, v_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> queue_, via_;
  std::vector<bool> seen_;
  double eps_ = 0.0;

  std::size_t index(const Cell& c) const { return c.i * n_ + c.j; }

  void add_basic(Cell c, double x) {
    basic_[index(c)] = true;
    basis_.push_back(c);
    flow_(c.i, c.j) = x;
  }

  // Staircase basis of exactly m + n - 1 cells; on a tie the row advances and
  // the next cell enters the basis at zero flow.
  void north_west_corner() {
    std::vector<double> rs = supply_, rd = demand_;
    std::size_t i = 0, j = 0;
    for (;;) {
      double x;
      if (i + 1 == m_) x = rd[j];
      else if (j + 1 == n_) x = rs[i];
      else x = std::min(rs[i], rd[j]);
      x = std::max(x, 0.0);
      add_basic({i, j}, x);
      if (i + 1 == m_ && j + 1 == n_) break;
      rs[i] -= x;
      rd[j] -= x;
      if (i + 1 == m_) ++j;
      else if (j + 1 == n_) ++i;
      else if (rs[i] <= rd[j]) ++i;
      else ++j;
    }
  }

  // Row node i is i, column node j is m + j. Buffers keep their capacity across pivots.
  void build_adjacency() {
    adj_.resize(m_ + n_);
    for (auto& a : adj_) a.clear();
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      adj_[basis_[k].i].push_back(k);
      adj_[m_ + basis_[k].j].push_back(k);
    }
  }

  std::size_t other_end(std::size_t node, std::size_t k) const {
    return node < m_ ? m_ + basis_[k].j : basis_[k].i;
  }

  // u_i + v_j = c_ij on basic cells, u_0 = 0.
  void compute_potentials() {
    const double unset = std::numeric_limits<double>::quiet_NaN();
    u_.assign(m_, unset);
    v_.assign(n_, unset);
    queue_.clear();
    u_[0] = 0.0;
    queue_.push_back(0);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const auto node = queue_[head];
      for (auto k : adj_[node]) {
        const auto& c = basis_[k];
        if (node < m_ && std::isnan(v_[c.j])) {
          v_[c.j] = cost_(c.i, c.j) - u_[c.i];
          queue_.push_back(m_ + c.j);
        } else if (node >= m_ && std::isnan(u_[c.i])) {
          u_[c.i] = cost_(c.i, c.j) - v_[c.j];
          queue_.push_back(c.i);
        }
      }
    }
  }

  std::optional<Cell> find_entering() const {
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        if (basic_[i * n_ + j]) continue;
        if (cost_(i, j) - u_[i] - v_[j] < -eps_) return Cell{i, j};
      }
    return std::nullopt;
  }

  // Tree path from row node `from_row` to column node `to_col`, as basis indices.
  std::vector<std::size_t> tree_path(std::size_t from_row, std::size_t to_col) {
    const std::size_t nodes = m_ + n_;
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    via_.assign(nodes, none);
    seen_.assign(nodes, false);
    queue_.clear();
    seen_[from_row] = true;
    queue_.push_back(from_row);
    const std::size_t target = m_ + to_col;
    for (std::size_t head = 0; head < queue_.size() && !seen_[target]; ++head) {
      const auto node = queue_[head];
      for (auto k : adj_[node]) {
        const std::size_t other = other_end(node, k);
        if (seen_[other]) continue;
        seen_[other] = true;
        via_[other] = k;
        queue_.push_back(other);
      }
    }
    if (!seen_[target]) throw Error("transport basis is not a spanning tree");
    std::vector<std::size_t> path;
    for (std::size_t node = target; node != from_row;) {
      const auto k = via_[node];
      path.push_back(k);
      node = other_end(node, k);
    }
    std::reverse(path.begin(), path.end());  // starts at from_row
    return path;
  }

  void pivot(Cell entering) {
    const auto path = tree_path(entering.i, entering.j);
    // Cycle: entering (+), then path edges alternate -, +, -, ... starting next to row entering.i.
    std::size_t leaving_pos = 0;
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving_index = std::numeric_limits<std::size_t>::max();
    for (std::size_t p = 0; p < path.size(); p += 2) {
      const auto& c = basis_[path[p]];
      const double x = flow_(c.i, c.j);
      if (x < theta || (x == theta && index(c) < leaving_index)) {
        theta = x;
        leaving_index = index(c);
        leaving_pos = p;
      }
    }
    for (std::size_t p = 0; p < path.size(); ++p) {
      const auto& c = basis_[path[p]];
      if (p % 2 == 0) flow_(c.i, c.j) -= theta;
      else flow_(c.i, c.j) += theta;
    }
    const auto leaving_k = path[leaving_pos];
    const Cell leaving = basis_[leaving_k];
    flow_(leaving.i, leaving.j) = 0.0;
    basic_[index(leaving)] = false;
    basis_[leaving_k] = entering;
    basic_[index(entering)] = true;
    flow_(entering.i, entering.j) = theta;
  }
};

struct BasicSolution {
  Matrix flow;
  double objective = 0.0;
};

// Re-derives the flows of a spanning-tree basis from the masses alone. Removing
// edge e splits the tree, and x_e is the net mass of the side away from the
// root, so every flow is a signed sum of masses. Sums and cost products are
// carried exactly and rounded once. The root absorbs the (tolerated) imbalance
// between total supply and demand; it is placed on the side with the larger
// total so that no node ends up shipping or receiving less than its mass.
BasicSolution evaluate_basis(const std::vector<TransportSimplex::Cell>& basis, const std::vector<double>& supply,
                             const std::vector<double>& demand, const Matrix& cost) {
  const std::size_t m = supply.size(), n = demand.size(), nodes = m + n;
  ExactSum balance;
  for (double s : supply) balance.add(s);
  for (double d : demand) balance.add(-d);
  const std::size_t root = balance.value() >= 0.0 ? m + n - 1 : 0;

  std::vector<std::vector<std::size_t>> adj(nodes);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    adj[basis[k].i].push_back(k);
    adj[m + basis[k].j].push_back(k);
  }
  constexpr auto none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent_edge(nodes, none), order;
  std::vector<bool> seen(nodes, false);
  std::vector<std::size_t> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    const auto node = stack.back();
    stack.pop_back();
    order.push_back(node);
    for (auto k : adj[node]) {
      const std::size_t other = node < m ? m + basis[k].j : basis[k].i;
      if (seen[other]) continue;
      seen[other] = true;
      parent_edge[other] = k;
      stack.push_back(other);
    }
  }
  if (order.size() != nodes) throw Error("transport basis is not a spanning tree");

  // Subtree membership, children before parents.
  std::vector<std::vector<std::size_t>> subtree(nodes);
  BasicSolution out{Matrix(m, n), 0.0};
  ExactSum objective;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto node = *it;
    subtree[node].push_back(node);
    if (node == root) break;
    const auto k = parent_edge[node];
    const double sign = node < m ? 1.0 : -1.0;  // row subtrees push mass out, column subtrees pull it in
    const double c = cost(basis[k].i, basis[k].j);
    ExactSum flow;
    for (auto v : subtree[node]) {
      const double mass = v < m ? sign * supply[v] : -sign * demand[v - m];
      flow.add(mass);
      objective.add_product(mass, c);
    }
    out.flow(basis[k].i, basis[k].j) = std::max(flow.value(), 0.0);
    const std::size_t up = node < m ? m + basis[k].j : basis[k].i;
    auto& dst = subtree[up];
    dst.insert(dst.end(), subtree[node].begin(), subtree[node].end());
  }
  out.objective = objective.value();
  return out;
}

}  // namespace

TransportPlan solve_transport(const TransportProblem& problem) {
  problem.validate();
  const auto& p = problem;

  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < p.supply.size(); ++i)
    if (p.supply[i] > 0.0) rows.push_back(i);
  for (std::size_t j = 0; j < p.demand.size(); ++j)
    if (p.demand[j] > 0.0) cols.push_back(j);

  std::vector<double> supply, demand;
  for (auto i : rows) supply.push_back(p.supply[i]);
  for (auto j : cols) demand.push_back(p.demand[j]);
  Matrix cost(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) cost(a, b) = p.cost(rows[a], cols[b]);

  TransportSimplex simplex(supply, demand, cost);
  simplex.solve();
  const auto reduced = evaluate_basis(simplex.basis(), supply, demand, cost);

  TransportPlan plan;
  plan.flow = Matrix(p.supply.size(), p.demand.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) plan.flow(rows[a], cols[b]) = reduced.flow(a, b);
  plan.objective = reduced.objective;
  return plan;
}

double relaxed_lower_bound(const TransportProblem& problem) {
  problem.validate();
  const auto& p = problem;
  // Rounded once from the exact sums, like the solver's objective, so the
  // comparison against it is not decided by summation order.
  ExactSum by_rows;
  for (std::size_t i = 0; i < p.supply.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < p.demand.size(); ++j) best = std::min(best, p.cost(i, j));
    by_rows.add_product(p.supply[i], best);
  }
  ExactSum by_cols;
  for (std::size_t j = 0; j < p.demand.size(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.supply.size(); ++i) best = std::min(best, p.cost(i, j));
    by_cols.add_product(p.demand[j], best);
  }
  return std::max(by_rows.value(), by_cols.value());
}

}  // namespace semsim
