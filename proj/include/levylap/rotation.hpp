#pragma once

// Curves W: [0,1] -> SO(4) with closed-form derivatives, and their
// logarithmic derivatives in so(4).

#include <functional>
#include <string>
#include <vector>

#include "levylap/linalg4.hpp"

namespace levylap {

/// Scalar coefficient function theta(t) with its derivative.
struct Profile {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  bool constant = false;

  static Profile constant_value(double c);
  /// Tokens: a number (constant), "t", "tN" (t^N), "sin", "cos", "sinN",
  /// "cosN" (sin(N pi t), cos(N pi t); no N means N = 1), optionally
  /// prefixed by "c*" for a numeric scale c. Throws DomainError otherwise.
  static Profile parse(const std::string& token);
};

struct RotationTerm {
  Profile theta;
  Isoclinic factor;
  /// Generator slot 0, 1 or 2 within the factor.
  int index;
};

enum class RotationFactor { kLeft, kRight, kMixed, kConstant };

const char* to_string(RotationFactor f);

/// W(t) = exp(theta_1(t) G_1) exp(theta_2(t) G_2) ... with each G_i one of
/// the unnormalized isoclinic generators. Because G_i^2 = -I,
/// exp(theta G) = cos(theta) I + sin(theta) G.
class RotationCurve {
 public:
  RotationCurve(std::string id, std::vector<RotationTerm> terms);

  /// Profiles attached to generators 0, 1, 2, 0, ... of one factor.
  /// Throws DomainError if the sampled span of W^{-1} W' is below
  /// `required_span`.
  static RotationCurve make(Isoclinic factor, const std::vector<Profile>& profiles,
                            int required_span = 0);
  /// "left:t,t2", "right:t", "mixed:t,t2" (alternating left/right slots),
  /// "identity".
  static RotationCurve parse(const std::string& spec, int required_span = 0);
  static RotationCurve identity();

  const std::string& id() const { return id_; }
  const std::vector<RotationTerm>& terms() const { return terms_; }
  RotationFactor factor() const;

  Mat4 value(double t) const;
  Mat4 derivative(double t) const;
  /// W^{-1} W'.
  So4Element left_log_derivative(double t) const;
  /// W' W^{-1}.
  So4Element right_log_derivative(double t) const;

  /// Rank of the sampled values of W^{-1} W' (as 6-vectors), singular
  /// values counted above tol * max(1, largest).
  int span(int samples = 64, double tol = 1e-8) const;

 private:
  std::string id_;
  std::vector<RotationTerm> terms_;
};

/// The same profiles moved to the other isoclinic factor.
RotationCurve mirrored(const RotationCurve& w);

}  // namespace levylap
