#include "levylap/rotation.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

#include "levylap/errors.hpp"

namespace levylap {

namespace {

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::optional<int> parse_suffix(const std::string& s, const std::string& prefix) {
  if (s.rfind(prefix, 0) != 0) return std::nullopt;
  const std::string rest = s.substr(prefix.size());
  if (rest.empty()) return 1;
  const auto v = parse_number(rest);
  if (!v || *v < 1 || *v != std::floor(*v)) return std::nullopt;
  return static_cast<int>(*v);
}

Profile base_profile(const std::string& tok) {
  constexpr double pi = std::numbers::pi;
  if (auto c = parse_number(tok)) return Profile::constant_value(*c);
  if (auto n = parse_suffix(tok, "sin")) {
    const double w = *n * pi;
    return {tok, [w](double t) { return std::sin(w * t); },
            [w](double t) { return w * std::cos(w * t); }};
  }
  if (auto n = parse_suffix(tok, "cos")) {
    const double w = *n * pi;
    return {tok, [w](double t) { return std::cos(w * t); },
            [w](double t) { return -w * std::sin(w * t); }};
  }
  if (auto n = parse_suffix(tok, "t")) {
    const int p = *n;
    return {tok, [p](double t) { return std::pow(t, p); },
            [p](double t) { return p * std::pow(t, p - 1); }};
  }
  throw DomainError("unknown profile token '" + tok + "'");
}

Mat4 exp_generator(double theta, const Mat4& g) {
  return std::cos(theta) * Mat4::Identity() + std::sin(theta) * g;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

Profile Profile::constant_value(double c) {
  Profile p{std::to_string(c), [c](double) { return c; }, [](double) { return 0.0; }};
  p.constant = true;
  return p;
}

Profile Profile::parse(const std::string& token) {
  const std::size_t star = token.find('*');
  if (star == std::string::npos) return base_profile(token);
  const auto scale = parse_number(token.substr(0, star));
  if (!scale) throw DomainError("bad profile scale in '" + token + "'");
  Profile b = base_profile(token.substr(star + 1));
  const double c = *scale;
  Profile p{token, [c, f = b.value](double t) { return c * f(t); },
            [c, f = b.derivative](double t) { return c * f(t); }};
  p.constant = b.constant;
  return p;
}

const char* to_string(RotationFactor f) {
  switch (f) {
    case RotationFactor::kLeft: return "left";
    case RotationFactor::kRight: return "right";
    case RotationFactor::kMixed: return "mixed";
    case RotationFactor::kConstant: break;
  }
  return "constant";
}

RotationCurve::RotationCurve(std::string id, std::vector<RotationTerm> terms)
    : id_(std::move(id)), terms_(std::move(terms)) {
  for (const auto& term : terms_)
    if (term.index < 0 || term.index > 2) throw DomainError("RotationCurve: bad generator slot");
}

RotationCurve RotationCurve::make(Isoclinic factor, const std::vector<Profile>& profiles,
                                  int required_span) {
  std::vector<RotationTerm> terms;
  std::string id = to_string(factor);
  id += ':';
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    terms.push_back({profiles[i], factor, static_cast<int>(i % 3)});
    id += (i ? "," : "") + profiles[i].name;
  }
  RotationCurve w(id, std::move(terms));
  if (required_span > 0 && w.span() < required_span)
    throw DomainError("RotationCurve: span of W^{-1}W' below the required " +
                      std::to_string(required_span));
  return w;
}

RotationCurve RotationCurve::parse(const std::string& spec, int required_span) {
  if (spec == "identity") return identity();
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos) throw DomainError("rotation spec needs 'factor:profiles'");
  const std::string kind = spec.substr(0, colon);
  std::vector<Profile> profiles;
  for (const auto& tok : split(spec.substr(colon + 1), ',')) profiles.push_back(Profile::parse(tok));
  if (kind == "left") return make(Isoclinic::kLeft, profiles, required_span);
  if (kind == "right") return make(Isoclinic::kRight, profiles, required_span);
  if (kind == "mixed") {
    std::vector<RotationTerm> terms;
    for (std::size_t i = 0; i < profiles.size(); ++i)
      terms.push_back({profiles[i], i % 2 == 0 ? Isoclinic::kLeft : Isoclinic::kRight,
                       static_cast<int>((i / 2) % 3)});
    RotationCurve w(spec, std::move(terms));
    if (required_span > 0 && w.span() < required_span)
      throw DomainError("RotationCurve: span of W^{-1}W' below the required " +
                        std::to_string(required_span));
    return w;
  }
  throw DomainError("unknown rotation factor '" + kind + "'");
}

RotationCurve RotationCurve::identity() { return RotationCurve("identity", {}); }

RotationFactor RotationCurve::factor() const {
  bool left = false, right = false;
  for (const auto& term : terms_) {
    if (term.theta.constant) continue;
    (term.factor == Isoclinic::kLeft ? left : right) = true;
  }
  if (left && right) return RotationFactor::kMixed;
  if (left) return RotationFactor::kLeft;
  if (right) return RotationFactor::kRight;
  return RotationFactor::kConstant;
}

Mat4 RotationCurve::value(double t) const {
  Mat4 w = Mat4::Identity();
  for (const auto& term : terms_)
    w = w * exp_generator(term.theta.value(t),
                          So4Element::generator(term.factor, term.index).matrix());
  return w;
}

Mat4 RotationCurve::derivative(double t) const {
  const std::size_t n = terms_.size();
  std::vector<Mat4> e(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = So4Element::generator(terms_[i].factor, terms_[i].index).matrix();
    e[i] = exp_generator(terms_[i].theta.value(t), g[i]);
  }
  Mat4 acc = Mat4::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    Mat4 term = Mat4::Identity();
    for (std::size_t j = 0; j < n; ++j)
      term = term * (j == i ? Mat4(terms_[i].theta.derivative(t) * g[i] * e[i]) : e[j]);
    acc += term;
  }
  return acc;
}

So4Element RotationCurve::left_log_derivative(double t) const {
  return So4Element(value(t).transpose() * derivative(t));
}

So4Element RotationCurve::right_log_derivative(double t) const {
  return So4Element(derivative(t) * value(t).transpose());
}

int RotationCurve::span(int samples, double tol) const {
  Eigen::MatrixXd m(6, samples);
  for (int s = 0; s < samples; ++s) {
    const So4Element l = left_log_derivative((s + 0.5) / samples);
    int row = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) m(row++, s) = l(a, b);
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
  const double cut = tol * std::max(1.0, sv.size() ? sv[0] : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) ++rank;
  return rank;
}

RotationCurve mirrored(const RotationCurve& w) {
  std::vector<RotationTerm> terms = w.terms();
  for (auto& term : terms) term.factor = other(term.factor);
  std::string id = w.id();
  if (id.rfind("left:", 0) == 0)
    id = "right:" + id.substr(5);
  else if (id.rfind("right:", 0) == 0)
    id = "left:" + id.substr(6);
  return RotationCurve(id, std::move(terms));
}

}  // namespace levylap
