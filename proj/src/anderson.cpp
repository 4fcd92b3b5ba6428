#include "boussinesq/anderson.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

namespace bouss {

AAHistory::AAHistory(int depth, Eigen::SparseMatrix<double, Eigen::RowMajor> metric)
    : depth_(depth), metric_(std::move(metric)) {
  if (depth < 0) throw std::invalid_argument("Anderson depth must be >= 0");
  if (metric_.rows() != metric_.cols()) throw std::invalid_argument("Anderson metric must be square");
}

double AAHistory::inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return a.dot(metric_ * b);
}

void AAHistory::clear() {
  x_.clear();
  gx_.clear();
  w_.clear();
  mw_.clear();
  gram_.resize(0, 0);
}

void AAHistory::push(const Eigen::VectorXd& x, const Eigen::VectorXd& gx) {
  if (x.size() != metric_.rows() || gx.size() != metric_.rows()) {
    throw std::invalid_argument("AAHistory::push: vector size does not match the metric");
  }
  if (size() == depth_ + 1) {
    x_.pop_front();
    gx_.pop_front();
    w_.pop_front();
    mw_.pop_front();
    const int s = static_cast<int>(gram_.rows()) - 1;
    gram_ = gram_.bottomRightCorner(s, s).eval();
  }
  x_.push_back(x);
  gx_.push_back(gx);
  w_.push_back(gx - x);
  mw_.push_back(metric_ * w_.back());

  const int s = size();
  Eigen::MatrixXd g(s, s);
  g.topLeftCorner(s - 1, s - 1) = gram_;
  for (int i = 0; i < s; ++i) {
    const double v = w_[i].dot(mw_.back());
    g(i, s - 1) = v;
    g(s - 1, i) = v;
  }
  gram_ = std::move(g);
}

AndersonCoefficients anderson_coefficients(const Eigen::MatrixXd& gram) {
  const int s = static_cast<int>(gram.rows());
  if (s < 2) {
    throw std::invalid_argument("anderson_coefficients needs at least 2 updates, got " +
                                std::to_string(s));
  }
  const int k = s - 1;
  const double gkk = gram(k, k);

  AndersonCoefficients out;
  out.alpha = Eigen::VectorXd::Zero(k);

  // Minimize |w_k + sum_j alpha_j (w_j - w_k)|: normal equations over the
  // differences, written in terms of the update Gram matrix.
  int first = 0;
  Eigen::MatrixXd reduced;
  Eigen::VectorXd rhs;
  while (true) {
    const int a = k - first;
    reduced.resize(a, a);
    rhs.resize(a);
    for (int i = 0; i < a; ++i) {
      const int gi = first + i;
      rhs[i] = -(gram(gi, k) - gkk);
      for (int j = 0; j < a; ++j) {
        const int gj = first + j;
        reduced(i, j) = gram(gi, gj) - gram(gi, k) - gram(k, gj) + gkk;
      }
    }
    double scale = gkk;
    for (int i = first; i < k; ++i) scale += gram(i, i);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    const bool ill = !(lmin > 0.0) || lmax / lmin > kAndersonMaxCondition;
    if (ill && a > 1) {
      ++first;
      ++out.pruned;
      continue;
    }
    Eigen::MatrixXd system = reduced;
    if (!(lmin > scale / kAndersonMaxCondition)) {
      system.diagonal().array() += 1e-12 * scale;
      out.regularized = true;
    }
    if (scale > 0.0) {
      out.alpha.segment(first, a) = system.ldlt().solve(rhs);
    }
    const Eigen::VectorXd al = out.alpha.segment(first, a);
    const double obj2 = gkk - 2.0 * al.dot(rhs) + al.dot(reduced * al);
    out.objective = std::sqrt(std::max(0.0, obj2));
    break;
  }

  // alpha = 0 is feasible, so the optimum can never exceed |w_k|.
  const double wk = std::sqrt(std::max(0.0, gkk));
  if (out.objective > wk * (1.0 + 1e-10) + 1e-300) {
    throw std::logic_error("anderson_coefficients: objective " + std::to_string(out.objective) +
                           " exceeds |w_k| = " + std::to_string(wk));
  }
  return out;
}

AndersonCoefficients anderson_coefficients(const AAHistory& hist) {
  return anderson_coefficients(hist.gram());
}

Eigen::VectorXd mixing_weights(const AndersonCoefficients& coeffs) {
  const auto k = coeffs.alpha.size();
  Eigen::VectorXd beta(k + 1);
  beta.head(k) = coeffs.alpha;
  beta[k] = 1.0 - coeffs.alpha.sum();
  return beta;
}

Eigen::VectorXd anderson_mix(const AAHistory& hist, const AndersonCoefficients& coeffs) {
  if (hist.empty()) throw std::invalid_argument("anderson_mix: empty history");
  const int k = hist.size() - 1;
  if (coeffs.alpha.size() != k) throw std::invalid_argument("anderson_mix: coefficient count mismatch");
  if (k == 0 || (coeffs.alpha.array() == 0.0).all()) return hist.image(k);
  Eigen::VectorXd out = (1.0 - coeffs.alpha.sum()) * hist.image(k);
  for (int j = 0; j < k; ++j) {
    if (coeffs.alpha[j] != 0.0) out += coeffs.alpha[j] * hist.image(j);
  }
  return out;
}

Eigen::VectorXd anderson_mix(const AAHistory& hist, int m) {
  if (hist.empty()) throw std::invalid_argument("anderson_mix: empty history");
  if (m == 0 || hist.size() < 2) return hist.image(hist.size() - 1);
  if (hist.size() > m + 1) throw std::invalid_argument("anderson_mix: history deeper than m");
  return anderson_mix(hist, anderson_coefficients(hist));
}

}  // namespace bouss
