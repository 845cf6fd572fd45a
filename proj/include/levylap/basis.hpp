#pragma once

// Orthonormal bases of L2([0,1]) vanishing at both ends, and the weak
// uniform density (equidensity) residual.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace levylap {

enum class BasisKind { kSine, kSturmLiouville };

const char* to_string(BasisKind k);

class BasisFamily {
 public:
  using Fn = std::function<double(double)>;

  /// e_k(t) = sqrt(2) sin(k pi t).
  static BasisFamily sine();

  /// Normalized eigenfunctions of u'' - r u + lambda u = 0, u(0) = u(1) = 0,
  /// from a tridiagonal eigen-solve on `grid` intervals. Values between grid
  /// nodes use the cubic spline whose node second derivatives are
  /// (r - lambda) u. Sign fixed by u'(0) > 0.
  static BasisFamily sturm_liouville(Fn r, std::string r_name, int modes, int grid = 2048);

  BasisKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  /// Largest available mode index (k is 1-based).
  int max_modes() const;

  double value(int k, double t) const;
  double derivative(int k, double t) const;
  /// Eigenvalue lambda_k (k^2 pi^2 for the sine basis).
  double eigenvalue(int k) const;

 private:
  struct Tabulated;
  BasisFamily() = default;
  void check_index(int k) const;

  BasisKind kind_ = BasisKind::kSine;
  std::string name_ = "sine";
  std::shared_ptr<const Tabulated> table_;
};

/// int_0^1 h(t) ((1/n) sum_{k<=n} e_k(t)^2 - 1) dt, composite trapezoid rule
/// with `intervals` intervals.
double equidensity_residual(const BasisFamily& basis, const std::function<double(double)>& h,
                            int n, int intervals = 512);

/// Gram matrix of e_1..e_n by composite Gauss-Legendre quadrature.
Eigen::MatrixXd gram_matrix(const BasisFamily& basis, int n, int panels = 2048);

}  // namespace levylap
