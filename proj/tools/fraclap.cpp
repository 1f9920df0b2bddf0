// Command-line front end: one binary, one subcommand per experiment.
// Exit codes: 0 all checks passed, 2 a checked inequality or invariant failed, 1 anything else.

#include "fraclap/config.hpp"
#include "fraclap/eigensolver.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/inequalities.hpp"
#include "fraclap/io.hpp"
#include "fraclap/kernel.hpp"
#include "fraclap/nehari.hpp"
#include "fraclap/payne.hpp"
#include "fraclap/polarization.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>

namespace {

using fraclap::ExperimentConfig;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kViolation = 2;
constexpr int kFailure = 1;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out;
  std::string mode; // payne only
};

ExperimentConfig load(const Common& c, bool required) {
  ExperimentConfig cfg;
  if (!c.config.empty()) {
    cfg = fraclap::load_config(c.config);
  } else if (required) {
    throw fraclap::Error("--config is required for this subcommand");
  }
  if (c.seed) {
    cfg.seed = *c.seed;
  }
  return cfg;
}

// --threads, then the config, then FRAC_PLAP_THREADS, then the OpenMP default.
void set_threads(const Common& c, const ExperimentConfig& cfg) {
  int n = 0;
  if (c.threads) {
    n = *c.threads;
  } else if (cfg.threads > 0) {
    n = cfg.threads;
  } else if (const char* env = std::getenv("FRAC_PLAP_THREADS")) {
    try {
      n = std::stoi(env);
    } catch (const std::exception&) {
      throw fraclap::Error(std::string("FRAC_PLAP_THREADS is not an integer: ") + env);
    }
  }
  if (n < 0) {
    throw fraclap::Error("thread count must be positive");
  }
  if (n > 0) {
    omp_set_num_threads(n);
  }
}

fraclap::KernelWeights kernel_for(const fraclap::Window& w, const ExperimentConfig& cfg) {
  return cfg.kernel_cache.empty() ? fraclap::build_kernel(w, cfg.s, cfg.p)
                                  : fraclap::build_kernel_cached(w, cfg.s, cfg.p, cfg.kernel_cache);
}

// Writes the report (stdout without --out) and the grid function next to it as <stem>_u.csv.
void emit(const Common& c, const json& report, const fraclap::GridFunction* u) {
  if (c.out.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  const std::filesystem::path out(c.out);
  fraclap::write_json(report, out);
  if (u != nullptr) {
    std::filesystem::path csv = out;
    csv.replace_filename(out.stem().string() + "_u.csv");
    fraclap::write_grid_csv(*u, csv);
  }
}

int run_eigen(const Common& c) {
  const ExperimentConfig cfg = load(c, true);
  set_threads(c, cfg);
  const fraclap::LatticeDomain d = fraclap::build_domain(cfg.domain);
  const fraclap::KernelWeights k = kernel_for(d.box, cfg);
  const fraclap::FirstEigenpair first = fraclap::first_eigenpair(d, k, cfg.tol, cfg.max_iter);
  fraclap::EigenOptions o;
  o.tol = cfg.tol;
  o.multistarts = cfg.multistarts;
  o.seed = cfg.seed;
  o.max_iter = cfg.max_iter;
  fraclap::EigenReport rep = fraclap::second_eigen_mu2(d, k, o);
  rep.lambda1 = first.lambda1;
  const fraclap::SecondEigenCheck check = fraclap::verify_second_eigen(rep.u2, rep.mu2, k, 1e-6);
  constexpr int samples = 720;
  const auto curve = fraclap::rayleigh_curve(rep.u2, k, samples);
  int arg = 0;
  for (int j = 1; j < samples; ++j) {
    if (curve[static_cast<std::size_t>(j)].value > curve[static_cast<std::size_t>(arg)].value) {
      arg = j;
    }
  }
  // alpha = beta at angles pi/4 and 5pi/4
  auto circ = [&](int a, int b) {
    const int dd = std::abs(a - b) % samples;
    return std::min(dd, samples - dd);
  };
  const int off = std::min(circ(arg, samples / 8), circ(arg, 5 * samples / 8));
  const bool order_ok = rep.mu2 >= first.lambda1 * (1.0 - 1e-10);
  const bool curve_ok = off <= 2;
  json j = fraclap::to_json(rep);
  j["first"] = fraclap::to_json(first);
  j["identities"] = fraclap::to_json(check);
  j["rayleigh_curve"] = {{"samples", samples}, {"argmax", arg}, {"offset_from_diagonal", off},
                         {"max", curve[static_cast<std::size_t>(arg)].value}};
  j["checks"] = {{"mu2_ge_lambda1", order_ok}, {"identities", check.identities_ok}, {"curve_max_on_diagonal", curve_ok}};
  j["config"] = fraclap::config_to_json(cfg);
  emit(c, j, &rep.u2);
  return order_ok && check.identities_ok && curve_ok ? kOk : kViolation;
}

int run_lens(const Common& c) {
  const ExperimentConfig cfg = load(c, true);
  set_threads(c, cfg);
  const fraclap::LatticeDomain d = fraclap::build_domain(cfg.domain);
  const fraclap::KernelWeights k = kernel_for(d.box, cfg);
  const fraclap::Nonlinearity nl = fraclap::build_nonlinearity(cfg);
  fraclap::LensOptions o;
  o.tol = cfg.tol;
  o.multistarts = cfg.multistarts;
  o.seed = cfg.seed;
  o.max_iter = cfg.max_iter;
  const fraclap::LensReport rep = fraclap::lens_minimize(d, nl, k, o);
  const fraclap::GroundState gs = fraclap::nehari_ground_state(d, nl, k, cfg.tol, cfg.max_iter);
  const bool res_ok = std::abs(rep.residual_plus) <= 1e-8 * rep.scale && std::abs(rep.residual_minus) <= 1e-8 * rep.scale;
  const bool repro_ok =
      std::abs(rep.reprojection.t_plus - 1.0) <= 1e-8 && std::abs(rep.reprojection.t_minus - 1.0) <= 1e-8;
  const bool gap_ok = rep.g_identity_gap <= 1e-10 * std::abs(rep.level);
  const bool level_ok = rep.level > gs.level;
  json j = fraclap::to_json(rep);
  j["ground_state"] = fraclap::to_json(gs);
  j["checks"] = {{"nehari_residuals", res_ok},
                 {"reprojection", repro_ok},
                 {"g_identity", gap_ok},
                 {"level_above_ground_state", level_ok}};
  j["config"] = fraclap::config_to_json(cfg);
  emit(c, j, &rep.u);
  return res_ok && repro_ok && gap_ok && level_ok ? kOk : kViolation;
}

int run_payne(const Common& c) {
  ExperimentConfig cfg = load(c, true);
  if (!c.mode.empty()) {
    cfg.mode = c.mode;
    if (cfg.mode == "lens" && !cfg.nonlinearity) {
      throw fraclap::ParameterError("q: required in lens mode");
    }
  }
  set_threads(c, cfg);
  const fraclap::PayneReport rep = fraclap::run_payne_experiment(cfg);
  json j = fraclap::to_json(rep);
  j["config"] = fraclap::config_to_json(cfg);
  emit(c, j, &rep.u);
  return rep.ok ? kOk : kViolation;
}

int run_polarize(const Common& c) {
  const ExperimentConfig cfg = load(c, true);
  set_threads(c, cfg);
  const fraclap::LatticeDomain d = fraclap::build_domain(cfg.domain);
  const fraclap::ReflectionParam a = fraclap::ReflectionParam::from_value(cfg.a, cfg.domain.h);
  fraclap::GridFunction u;
  if (!cfg.input.empty()) {
    u = fraclap::read_grid_csv(cfg.input, d.box);
  } else {
    u = fraclap::GridFunction::zeros(d.box);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (d.inside(i)) {
        u[i] = dist(rng);
      }
    }
  }
  const fraclap::Window hull = d.box.reflected_hull(a);
  const fraclap::GridFunction uh = u.embedded(hull);
  const fraclap::GridFunction pu = fraclap::polarize(uh, a, fraclap::Variant::P);
  const fraclap::Nonlinearity nl =
      cfg.nonlinearity ? fraclap::build_nonlinearity(cfg) : fraclap::Nonlinearity::power(cfg.p, cfg.p + 1.0);
  const fraclap::IdentityReport ident = fraclap::polarization_identities_check(uh, a, nl);
  const fraclap::KernelWeights k = kernel_for(hull, cfg);
  const fraclap::EqualityReport eq = fraclap::equality_case(uh, a, k);
  const auto& df = eq.deficits;
  const bool deficits_ok =
      df.deficit_plus >= -df.eps_num && df.deficit_minus >= -df.eps_num && df.seminorm_deficit >= -df.eps_num;
  json j = {{"schema_version", fraclap::kReportSchemaVersion},
            {"a", a.value()},
            {"identities", fraclap::to_json(ident)},
            {"equality", fraclap::to_json(eq)},
            {"checks", {{"identities", ident.ok()}, {"deficits", deficits_ok}}},
            {"config", fraclap::config_to_json(cfg)}};
  emit(c, j, &pu);
  return ident.ok() && deficits_ok ? kOk : kViolation;
}

int run_verify(const Common& c) {
  ExperimentConfig cfg = load(c, false);
  set_threads(c, cfg);
  const fraclap::InequalitySweep sw = fraclap::sweep_inequalities(cfg.p, cfg.samples, cfg.seed);
  json j = {{"schema_version", fraclap::kReportSchemaVersion},
            {"p", sw.p},
            {"samples", sw.samples},
            {"seed", cfg.seed},
            {"four_point", {{"failures", sw.four_point_failures}, {"equality_cases", sw.four_point_equality_cases}}},
            {"a3", {{"violations", sw.a3_violations}, {"equality_hits", sw.a3_equality_hits},
                    {"worst_relative_slack", sw.worst_a3_slack}}},
            {"a4", {{"violations", sw.a4_violations}, {"worst_relative_slack", sw.worst_a4_slack}}},
            {"ok", sw.ok()}};
  emit(c, j, nullptr);
  return sw.ok() ? kOk : kViolation;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments for the fractional p-Laplacian on lattice domains"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--config", common.config, "experiment config (JSON)");
    sc->add_option("--seed", common.seed, "override the config seed");
    sc->add_option("--threads", common.threads, "OpenMP threads (fallback: FRAC_PLAP_THREADS)");
    sc->add_option("--out", common.out, "report path; grid functions go to <stem>_u.csv");
  };
  CLI::App* pol = app.add_subcommand("polarize", "polarize a grid function and check the rearrangement identities");
  CLI::App* eig = app.add_subcommand("eigen", "first eigenvalue, mu2 and the second-eigenfunction identities");
  CLI::App* lens = app.add_subcommand("lens", "least energy nodal solution on the nodal Nehari set");
  CLI::App* payne = app.add_subcommand("payne", "support, lid and nodal-set diagnostics of a computed solution");
  CLI::App* ver = app.add_subcommand("verify-inequalities", "random sweep of the pointwise inequalities");
  for (CLI::App* sc : {pol, eig, lens, payne, ver}) {
    add_common(sc);
  }
  payne->add_option("--mode", common.mode, "eigen or lens")->check(CLI::IsMember({"eigen", "lens"}));
  payne->add_option("--domain", common.config, "alias of --config");
  payne->add_option("--report", common.out, "alias of --out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kFailure;
  }
  try {
    if (pol->parsed()) {
      return run_polarize(common);
    }
    if (eig->parsed()) {
      return run_eigen(common);
    }
    if (lens->parsed()) {
      return run_lens(common);
    }
    if (payne->parsed()) {
      return run_payne(common);
    }
    return run_verify(common);
  } catch (const fraclap::ConfigError& e) {
    std::cerr << "config error:\n" << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kFailure;
}
