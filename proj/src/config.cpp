#include "fraclap/config.hpp"

#include "fraclap/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fraclap {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) {
    if (!s.empty()) {
      s += "\n";
    }
    s += x;
  }
  return s;
}

// Reads optional typed fields and records type problems with their JSON path.
class Reader {
public:
  Reader(const json& j, std::string path, std::vector<std::string>& issues)
      : j_(j), path_(std::move(path)), issues_(issues) {}

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      return;
    }
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      issues_.push_back(at(key) + ": wrong type");
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  void unknown_keys() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        issues_.push_back(at(it.key()) + ": unknown key");
      }
    }
  }

private:
  const json& j_;
  std::string path_;
  std::vector<std::string>& issues_;
  std::set<std::string> seen_;
};

const std::map<std::string, std::vector<std::string>> kShapeParams = {
    {"interval", {"half_length"}},
    {"rectangle", {"half_length", "half_height"}},
    {"disk", {"radius"}},
    {"stadium", {"half_length", "radius"}},
};

void validate(const ExperimentConfig& c, std::vector<std::string>& issues) {
  static const std::set<std::string> modes = {"eigen", "lens", "polarize", "verify-inequalities"};
  if (c.schema_version != 1) {
    issues.push_back("schema_version: unsupported version " + std::to_string(c.schema_version));
  }
  if (!modes.count(c.mode)) {
    issues.push_back("mode: must be one of eigen, lens, polarize, verify-inequalities");
  }
  try {
    check_order_and_exponent(c.s, c.p);
  } catch (const ParameterError& e) {
    const std::string what = e.what();
    issues.push_back((what.find("order") != std::string::npos ? "s: " : "p: ") + what);
  }
  const DomainConfig& d = c.domain;
  if (d.dim != 1 && d.dim != 2) {
    issues.push_back("domain.dim: must be 1 or 2");
  } else if (!(d.h > 0.0)) {
    issues.push_back("domain.h: must be positive");
  } else {
    try {
      (void)build_box(d);
    } catch (const Error& e) {
      issues.push_back(std::string("domain.box: ") + e.what());
    }
  }
  const auto sp = kShapeParams.find(d.shape.kind);
  if (sp == kShapeParams.end()) {
    issues.push_back("domain.shape.kind: must be one of interval, rectangle, disk, stadium");
  } else {
    if ((d.shape.kind == "interval") != (d.dim == 1)) {
      issues.push_back("domain.shape.kind: " + d.shape.kind + " does not match dim " + std::to_string(d.dim));
    }
    for (const auto& name : sp->second) {
      const auto it = d.shape.params.find(name);
      if (it == d.shape.params.end()) {
        issues.push_back("domain.shape.params." + name + ": required");
      } else if (!(it->second > 0.0)) {
        issues.push_back("domain.shape.params." + name + ": must be positive");
      }
    }
    for (const auto& [name, v] : d.shape.params) {
      if (std::find(sp->second.begin(), sp->second.end(), name) == sp->second.end()) {
        issues.push_back("domain.shape.params." + name + ": unknown key");
      }
    }
  }
  if (c.nonlinearity) {
    const NonlinearityConfig& n = *c.nonlinearity;
    if (n.kind == "power") {
      if (!(n.q > c.p)) {
        issues.push_back("nonlinearity.q: superhomogeneity violated");
      }
    } else if (n.kind == "resonant") {
      if (c.mode == "lens") {
        issues.push_back("nonlinearity.kind: superhomogeneity violated");
      }
    } else if (n.kind == "sum_of_powers") {
      if (n.exponents.empty() || n.exponents.size() != n.coefficients.size()) {
        issues.push_back("nonlinearity.exponents: needs one coefficient per exponent");
      }
      for (double q : n.exponents) {
        if (!(q > c.p)) {
          issues.push_back("nonlinearity.exponents: superhomogeneity violated");
          break;
        }
      }
      for (double a : n.coefficients) {
        if (!(a > 0.0)) {
          issues.push_back("nonlinearity.coefficients: must be positive");
          break;
        }
      }
    } else {
      issues.push_back("nonlinearity.kind: must be one of power, resonant, sum_of_powers");
    }
  } else if (c.mode == "lens") {
    issues.push_back("q: required in lens mode");
  }
  if (c.nonlinearity && issues.empty()) {
    try {
      build_nonlinearity(c).check_subcritical(d.dim, c.s);
    } catch (const ParameterError& e) {
      issues.push_back(std::string("nonlinearity: ") + e.what());
    }
  }
  if (!(c.tol > 0.0)) {
    issues.push_back("tol: must be positive");
  }
  if (c.multistarts < 1) {
    issues.push_back("multistarts: must be at least 1");
  }
  if (c.max_iter < 1) {
    issues.push_back("max_iter: must be at least 1");
  }
  if (!(c.tau_rel > 0.0 && c.tau_rel < 1.0)) {
    issues.push_back("tau_rel: must be in (0,1)");
  }
  if (!(c.touch_threshold > 0.0)) {
    issues.push_back("touch_threshold: must be positive");
  }
  if (c.a_sweep_half_steps < 0) {
    issues.push_back("a_sweep_half_steps: must be nonnegative");
  }
  if (c.threads < 0) {
    issues.push_back("threads: must be nonnegative");
  }
  if (c.samples < 1) {
    issues.push_back("samples: must be at least 1");
  }
  if (c.mode == "polarize" && d.h > 0.0) {
    const double m = 2.0 * c.a / d.h;
    if (std::abs(m - std::round(m)) > 1e-9 * std::max(1.0, std::abs(m))) {
      issues.push_back("a: must be a multiple of h/2");
    }
  }
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : ParameterError(join(issues)), issues_(std::move(issues)) {}

ExperimentConfig config_from_json(const json& j) {
  std::vector<std::string> issues;
  if (!j.is_object()) {
    throw ConfigError({"$: expected an object"});
  }
  ExperimentConfig c;
  Reader r(j, "", issues);
  r.get("schema_version", c.schema_version);
  r.get("mode", c.mode);
  r.get("p", c.p);
  r.get("s", c.s);
  r.get("tol", c.tol);
  r.get("multistarts", c.multistarts);
  r.get("seed", c.seed);
  r.get("max_iter", c.max_iter);
  r.get("tau_rel", c.tau_rel);
  r.get("touch_threshold", c.touch_threshold);
  r.get("a_sweep_half_steps", c.a_sweep_half_steps);
  r.get("threads", c.threads);
  r.get("kernel_cache", c.kernel_cache);
  r.get("a", c.a);
  r.get("input", c.input);
  r.get("samples", c.samples);

  if (!r.has("domain")) {
    if (c.mode != "verify-inequalities") {
      issues.push_back("domain: required");
    }
    c.domain.shape.params = {{"half_length", 1.0}}; // unused, keeps the default domain valid
  } else if (!j["domain"].is_object()) {
    issues.push_back("domain: expected an object");
  } else {
    const json& jd = j["domain"];
    Reader rd(jd, "domain", issues);
    rd.get("dim", c.domain.dim);
    rd.get("h", c.domain.h);
    if (rd.has("box")) {
      const json& b = jd["box"];
      if (b.is_number()) {
        c.domain.box = {b.get<double>(), c.domain.dim == 2 ? b.get<double>() : 0.0};
      } else if (b.is_array() && b.size() == static_cast<std::size_t>(c.domain.dim) && b[0].is_number() &&
                 (b.size() == 1 || b[1].is_number())) {
        c.domain.box = {b[0].get<double>(), b.size() == 2 ? b[1].get<double>() : 0.0};
      } else {
        issues.push_back("domain.box: expected a number or one number per dimension");
      }
    }
    if (!rd.has("shape")) {
      issues.push_back("domain.shape: required");
    } else if (!jd["shape"].is_object()) {
      issues.push_back("domain.shape: expected an object");
    } else {
      Reader rs(jd["shape"], "domain.shape", issues);
      rs.get("kind", c.domain.shape.kind);
      rs.get("params", c.domain.shape.params);
      rs.unknown_keys();
    }
    rd.unknown_keys();
  }

  const bool has_q = r.has("q");
  if (r.has("nonlinearity")) {
    const json& jn = j["nonlinearity"];
    if (!jn.is_object()) {
      issues.push_back("nonlinearity: expected an object");
    } else {
      NonlinearityConfig n;
      Reader rn(jn, "nonlinearity", issues);
      rn.get("kind", n.kind);
      rn.get("q", n.q);
      rn.get("lambda", n.lambda);
      rn.get("exponents", n.exponents);
      rn.get("coefficients", n.coefficients);
      rn.unknown_keys();
      c.nonlinearity = n;
    }
    if (has_q) {
      issues.push_back("q: give either q or nonlinearity, not both");
    }
  } else if (has_q) {
    NonlinearityConfig n;
    r.get("q", n.q);
    c.nonlinearity = n;
  }
  r.unknown_keys();
  if (issues.empty()) {
    validate(c, issues);
  }
  if (!issues.empty()) {
    throw ConfigError(issues);
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["mode"] = c.mode;
  j["p"] = c.p;
  j["s"] = c.s;
  json d;
  d["dim"] = c.domain.dim;
  d["h"] = c.domain.h;
  d["box"] = c.domain.dim == 2 ? json::array({c.domain.box[0], c.domain.box[1]}) : json::array({c.domain.box[0]});
  d["shape"] = {{"kind", c.domain.shape.kind}, {"params", c.domain.shape.params}};
  j["domain"] = d;
  if (c.nonlinearity) {
    const auto& n = *c.nonlinearity;
    j["nonlinearity"] = {{"kind", n.kind},
                         {"q", n.q},
                         {"lambda", n.lambda},
                         {"exponents", n.exponents},
                         {"coefficients", n.coefficients}};
  }
  j["tol"] = c.tol;
  j["multistarts"] = c.multistarts;
  j["seed"] = c.seed;
  j["max_iter"] = c.max_iter;
  j["tau_rel"] = c.tau_rel;
  j["touch_threshold"] = c.touch_threshold;
  j["a_sweep_half_steps"] = c.a_sweep_half_steps;
  j["threads"] = c.threads;
  j["kernel_cache"] = c.kernel_cache;
  j["a"] = c.a;
  j["input"] = c.input;
  j["samples"] = c.samples;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open config file " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError({"$: not valid JSON (" + std::string(e.what()) + ")"});
  }
  return config_from_json(j);
}

Window build_box(const DomainConfig& d) {
  return Window::symmetric(d.dim, d.h, d.box);
}

LatticeDomain build_domain(const DomainConfig& d) {
  const Window box = build_box(d);
  const auto& pr = d.shape.params;
  auto param = [&](const char* name) {
    const auto it = pr.find(name);
    if (it == pr.end()) {
      throw ParameterError(std::string("domain.shape.params.") + name + ": required");
    }
    return it->second;
  };
  HalfWidth hw;
  if (d.shape.kind == "interval") {
    const double l = param("half_length");
    hw = [l](double) { return l; };
  } else if (d.shape.kind == "rectangle") {
    const double l = param("half_length");
    const double hh = param("half_height");
    hw = [l, hh](double x2) { return std::abs(x2) < hh ? l : 0.0; };
  } else if (d.shape.kind == "disk") {
    const double r = param("radius");
    hw = [r](double x2) { return std::abs(x2) < r ? std::sqrt(r * r - x2 * x2) : 0.0; };
  } else if (d.shape.kind == "stadium") {
    const double l = param("half_length");
    const double r = param("radius");
    hw = [l, r](double x2) { return std::abs(x2) < r ? l + std::sqrt(r * r - x2 * x2) : 0.0; };
  } else {
    throw ParameterError("domain.shape.kind: unknown shape " + d.shape.kind);
  }
  return make_steiner_domain(hw, box);
}

Nonlinearity build_nonlinearity(const ExperimentConfig& c) {
  if (!c.nonlinearity) {
    throw ParameterError("q: required in lens mode");
  }
  const NonlinearityConfig& n = *c.nonlinearity;
  const double p = c.p;
  if (n.kind == "power") {
    return Nonlinearity::power(p, n.q);
  }
  if (n.kind == "resonant") {
    return Nonlinearity::resonant(p, n.lambda);
  }
  if (n.kind == "sum_of_powers") {
    const auto qs = n.exponents;
    const auto cs = n.coefficients;
    for (double q : qs) {
      if (!(q > p)) {
        throw ParameterError("superhomogeneity violated");
      }
    }
    auto f = [qs, cs](double z) {
      double s = 0.0;
      for (std::size_t k = 0; k < qs.size(); ++k) {
        s += cs[k] * std::pow(std::abs(z), qs[k] - 2.0) * z;
      }
      return s;
    };
    auto F = [qs, cs](double z) {
      double s = 0.0;
      for (std::size_t k = 0; k < qs.size(); ++k) {
        s += cs[k] * std::pow(std::abs(z), qs[k]) / qs[k];
      }
      return s;
    };
    auto fp = [qs, cs](double z) {
      double s = 0.0;
      for (std::size_t k = 0; k < qs.size(); ++k) {
        s += cs[k] * (qs[k] - 1.0) * std::pow(std::abs(z), qs[k] - 2.0);
      }
      return s;
    };
    const double growth = *std::max_element(qs.begin(), qs.end());
    return Nonlinearity::custom(p, f, F, fp, "sum_of_powers", growth);
  }
  throw ParameterError("nonlinearity.kind: unknown kind " + n.kind);
}

} // namespace fraclap
