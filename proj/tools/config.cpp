#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>

#include "levylap/errors.hpp"

namespace levylap::cli {

namespace {

// Reads the keys of one section into their targets; anything left over is
// an unknown key.
class Section {
 public:
  Section(const json& doc, std::string name) : name_(std::move(name)) {
    if (!doc.contains(name_)) return;
    node_ = &doc.at(name_);
    if (!node_->is_object()) fail(name_, "must be an object");
  }

  void number(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(path(key), "must be a number");
      out = v->get<double>();
    }
  }
  void integer(const char* key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(path(key), "must be an integer");
      out = v->get<int>();
    }
  }
  void unsigned_integer(const char* key, unsigned& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(path(key), "must be a non-negative integer");
      out = v->get<unsigned>();
    }
  }
  void seed(const char* key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(path(key), "must be a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void boolean(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(path(key), "must be true or false");
      out = v->get<bool>();
    }
  }
  void string(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(path(key), "must be a string");
      out = v->get<std::string>();
    }
  }
  void strings(const char* key, std::vector<std::string>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(path(key), "must be an array of strings");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_string()) fail(path(key), "must be an array of strings");
        out.push_back(e.get<std::string>());
      }
    }
  }
  void point(const char* key, Vec4& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != 4) fail(path(key), "must be an array of 4 numbers");
      for (int m = 0; m < 4; ++m) {
        if (!(*v)[m].is_number()) fail(path(key), "must be an array of 4 numbers");
        out[m] = (*v)[m].get<double>();
      }
    }
  }

  /// Throws on keys that were never read.
  void finish() const {
    if (!node_) return;
    for (auto it = node_->begin(); it != node_->end(); ++it)
      if (!seen_.count(it.key())) fail(path(it.key()), "unknown key");
  }

 private:
  const json* find(const std::string& key) {
    if (!node_ || !node_->contains(key)) return nullptr;
    seen_[key] = true;
    return &node_->at(key);
  }
  std::string path(const std::string& key) const { return name_ + "." + key; }
  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
  }

  std::string name_;
  const json* node_ = nullptr;
  std::map<std::string, bool> seen_;
};

const char* kSections[] = {"connection", "metric", "curves", "rotation",
                           "basis",      "numerics", "tolerances"};

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool known = false;
    for (const char* s : kSections) known = known || it.key() == s;
    if (!known) throw ConfigError(it.key() + ": unknown section");
  }
  ExperimentConfig cfg;

  Section c(doc, "connection");
  c.string("kind", cfg.connection.kind);
  c.number("rho", cfg.connection.rho);
  c.point("center", cfg.connection.center);
  c.number("epsilon", cfg.connection.epsilon);
  c.seed("seed", cfg.connection.seed);
  c.finish();

  Section m(doc, "metric");
  m.string("kind", cfg.metric.kind);
  m.number("alpha", cfg.metric.alpha);
  m.integer("axis", cfg.metric.axis);
  m.finish();

  Section cv(doc, "curves");
  cv.integer("polynomial", cfg.curves.polynomial);
  cv.integer("trigonometric", cfg.curves.trigonometric);
  cv.seed("seed", cfg.curves.seed);
  cv.number("radius", cfg.curves.radius);
  cv.finish();

  Section r(doc, "rotation");
  r.string("factor", cfg.rotation.factor);
  r.strings("profiles", cfg.rotation.profiles);
  r.boolean("right_invariant", cfg.rotation.right_invariant);
  r.finish();

  Section b(doc, "basis");
  b.string("kind", cfg.basis.kind);
  b.string("potential", cfg.basis.potential);
  b.integer("grid", cfg.basis.grid);
  b.finish();

  Section n(doc, "numerics");
  n.integer("modes", cfg.numerics.modes);
  n.number("fd_step", cfg.numerics.fd_step);
  n.integer("transport_steps", cfg.numerics.transport_steps);
  n.integer("cesaro_steps", cfg.numerics.cesaro_steps);
  n.integer("panels", cfg.numerics.panels);
  n.integer("exp_steps", cfg.numerics.exp_steps);
  n.number("pairing_constant", cfg.numerics.pairing_constant);
  n.boolean("cesaro", cfg.numerics.cesaro);
  std::string estimator = to_string(cfg.numerics.estimator);
  n.string("estimator", estimator);
  cfg.numerics.estimator = parse_estimator(estimator);
  n.unsigned_integer("threads", cfg.numerics.threads);
  n.finish();

  Section t(doc, "tolerances");
  t.number("zero", cfg.tolerances.zero);
  t.number("separation_ratio", cfg.tolerances.separation_ratio);
  t.number("non_dual_floor", cfg.tolerances.non_dual_floor);
  t.number("cesaro_relative", cfg.tolerances.cesaro_relative);
  t.number("cesaro_absolute", cfg.tolerances.cesaro_absolute);
  t.number("pointwise", cfg.tolerances.pointwise);
  t.number("duality", cfg.tolerances.duality);
  t.number("splice_order_low", cfg.tolerances.splice_order_low);
  t.number("splice_order_high", cfg.tolerances.splice_order_high);
  t.finish();

  if (cfg.numerics.modes < 1) throw ConfigError("numerics.modes: must be positive");
  if (!(cfg.numerics.fd_step > 0.0)) throw ConfigError("numerics.fd_step: must be positive");
  if (cfg.numerics.transport_steps < 1 || cfg.numerics.cesaro_steps < 1 ||
      cfg.numerics.panels < 1 || cfg.numerics.exp_steps < 1)
    throw ConfigError("numerics: step and panel counts must be positive");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const ExperimentConfig& cfg) {
  const auto& c = cfg.connection;
  const auto& n = cfg.numerics;
  const auto& t = cfg.tolerances;
  json j;
  j["connection"] = {{"kind", c.kind},
                     {"rho", c.rho},
                     {"center", {c.center[0], c.center[1], c.center[2], c.center[3]}},
                     {"epsilon", c.epsilon},
                     {"seed", c.seed}};
  j["metric"] = {{"kind", cfg.metric.kind}, {"alpha", cfg.metric.alpha}, {"axis", cfg.metric.axis}};
  j["curves"] = {{"polynomial", cfg.curves.polynomial},
                 {"trigonometric", cfg.curves.trigonometric},
                 {"seed", cfg.curves.seed},
                 {"radius", cfg.curves.radius}};
  j["rotation"] = {{"factor", cfg.rotation.factor},
                   {"profiles", cfg.rotation.profiles},
                   {"right_invariant", cfg.rotation.right_invariant}};
  j["basis"] = {{"kind", cfg.basis.kind}, {"potential", cfg.basis.potential}, {"grid", cfg.basis.grid}};
  j["numerics"] = {{"modes", n.modes},
                   {"fd_step", n.fd_step},
                   {"transport_steps", n.transport_steps},
                   {"cesaro_steps", n.cesaro_steps},
                   {"panels", n.panels},
                   {"exp_steps", n.exp_steps},
                   {"pairing_constant", n.pairing_constant},
                   {"cesaro", n.cesaro},
                   {"estimator", to_string(n.estimator)},
                   {"threads", n.threads}};
  j["tolerances"] = {{"zero", t.zero},
                     {"separation_ratio", t.separation_ratio},
                     {"non_dual_floor", t.non_dual_floor},
                     {"cesaro_relative", t.cesaro_relative},
                     {"cesaro_absolute", t.cesaro_absolute},
                     {"pointwise", t.pointwise},
                     {"duality", t.duality},
                     {"splice_order_low", t.splice_order_low},
                     {"splice_order_high", t.splice_order_high}};
  return j;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(config_to_json(cfg).dump())));
  return buf;
}

}  // namespace levylap::cli
