#pragma once

#include <cstddef>
#include <vector>

namespace semsim {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<double>& data() const noexcept { return data_; }

  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Balanced transportation problem: move `supply` onto `demand` at `cost`.
struct TransportProblem {
  std::vector<double> supply;
  std::vector<double> demand;
  Matrix cost;  // supply.size() x demand.size()

  /// Throws Error unless both marginals are non-empty, nonnegative, sum to 1
  /// within kBalanceTolerance, and the cost is finite, nonnegative and of matching shape.
  void validate() const;
};

struct TransportPlan {
  Matrix flow;
  double objective = 0.0;
};

inline constexpr double kBalanceTolerance = 1e-9;
inline constexpr double kFeasibilityTolerance = 1e-7;

/// Exact optimum by the transportation simplex (MODI potentials).
///
/// Rows and columns with zero mass are dropped before solving. The initial
/// basis comes from the north-west corner rule; the entering cell is the
/// lowest row-major index with negative reduced cost and the leaving cell the
/// lowest-index minimum on the cycle's decreasing side (Bland's rule), so the
/// pivot sequence, and therefore the returned plan, is deterministic.
TransportPlan solve_transport(const TransportProblem& problem);

/// max(sum_i supply_i min_j cost_ij, sum_j demand_j min_i cost_ij): each side
/// relaxes the opposite marginal, so the value never exceeds the exact optimum.
double relaxed_lower_bound(const TransportProblem& problem);

}  // namespace semsim
