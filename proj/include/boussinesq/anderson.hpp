#pragma once

#include <deque>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace bouss {

/// Sliding window of fixed-point pairs (x_{j-1}, g(x_{j-1})) with the Gram
/// matrix of the updates w_j = g(x_{j-1}) - x_{j-1} in the inner product
/// <a, b> = a^T M b. Holds at most depth + 1 entries; index 0 is the oldest.
class AAHistory {
 public:
  AAHistory(int depth, Eigen::SparseMatrix<double, Eigen::RowMajor> metric);

  /// Appends a pair, evicting the oldest entry when the window is full.
  void push(const Eigen::VectorXd& x, const Eigen::VectorXd& gx);
  void clear();

  int depth() const { return depth_; }
  int size() const { return static_cast<int>(x_.size()); }
  bool empty() const { return x_.empty(); }

  const Eigen::VectorXd& x(int i) const { return x_[i]; }
  const Eigen::VectorXd& image(int i) const { return gx_[i]; }
  const Eigen::VectorXd& update(int i) const { return w_[i]; }
  const Eigen::MatrixXd& gram() const { return gram_; }

  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

 private:
  int depth_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> metric_;
  std::deque<Eigen::VectorXd> x_, gx_, w_, mw_;  // mw_ = M * w
  Eigen::MatrixXd gram_;
};

struct AndersonCoefficients {
  /// alpha[j] weights history entry j (j < size-1); the newest entry gets
  /// 1 - sum(alpha). Entries excluded by pruning carry zero.
  Eigen::VectorXd alpha;
  /// Minimized norm |(1 - sum alpha) w_k + sum alpha_j w_j|.
  double objective = 0.0;
  int pruned = 0;
  bool regularized = false;
};

/// Condition bound above which the oldest column is dropped.
inline constexpr double kAndersonMaxCondition = 1e10;

/// Least-squares mixing coefficients from a Gram matrix whose last row and
/// column belong to the newest update. Requires at least two updates.
AndersonCoefficients anderson_coefficients(const Eigen::MatrixXd& gram);
AndersonCoefficients anderson_coefficients(const AAHistory& hist);

/// Affine mixing of the stored images: (1 - sum alpha) g_k + sum alpha_j g_j.
/// Returns the newest image unchanged when m == 0 or fewer than two entries
/// are stored.
Eigen::VectorXd anderson_mix(const AAHistory& hist, int m);
Eigen::VectorXd anderson_mix(const AAHistory& hist, const AndersonCoefficients& coeffs);

/// Weights applied to the stored images, oldest first; they sum to one.
Eigen::VectorXd mixing_weights(const AndersonCoefficients& coeffs);

}  // namespace bouss
