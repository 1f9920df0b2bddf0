#include "fraclap/io.hpp"

#include "fraclap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace fraclap {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json grid_json(const GridFunction& u) {
  const Window& w = u.window;
  return {{"dim", w.dim}, {"h", w.h}, {"k1_lo", w.k1_lo}, {"n1", w.n1}, {"k2_lo", w.k2_lo}, {"n2", w.n2}};
}

json outcomes_json(const std::vector<MultistartOutcome>& v) {
  json a = json::array();
  for (const auto& o : v) {
    a.push_back({{"id", o.id},
                 {"profile", o.profile},
                 {"value", o.value},
                 {"iterations", o.iterations},
                 {"converged", o.converged},
                 {"residual", o.residual},
                 {"ok", o.ok},
                 {"error", o.error}});
  }
  return a;
}

json lid_json(const LidTouch& t) {
  return {{"dist_left", t.left},
          {"dist_right", t.right},
          {"dist_cylinder", t.cylinder},
          {"L", t.touches_left},
          {"R", t.touches_right},
          {"C", t.touches_cylinder}};
}

} // namespace

std::string grid_csv(const GridFunction& u) {
  const Window& w = u.window;
  std::vector<std::size_t> order(u.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(w.k1(a), w.k2(a)) < std::pair(w.k1(b), w.k2(b));
  });
  std::string out = w.dim == 2 ? "x1,x2,value\n" : "x1,value\n";
  for (std::size_t i : order) {
    out += num(w.x1(i));
    if (w.dim == 2) {
      out += "," + num(w.x2(i));
    }
    out += "," + num(u[i]) + "\n";
  }
  return out;
}

namespace {

void make_parent(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec); // failure shows up when opening
  }
}

} // namespace

void write_grid_csv(const GridFunction& u, const std::filesystem::path& path) {
  make_parent(path);
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  f << grid_csv(u);
  if (!f) {
    throw Error("write to " + path.string() + " failed");
  }
}

GridFunction read_grid_csv(const std::filesystem::path& path, const Window& window) {
  std::ifstream f(path);
  if (!f) {
    throw Error("cannot open " + path.string());
  }
  GridFunction u = GridFunction::zeros(window);
  std::string line;
  int lineno = 0;
  const std::size_t cols = window.dim == 2 ? 3 : 2;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || (lineno == 1 && line.rfind("x1", 0) == 0)) {
      continue;
    }
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(path.string() + ":" + std::to_string(lineno) + ": not a number: " + cell);
      }
    }
    if (vals.size() != cols) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(cols) + " columns");
    }
    auto half_index = [&](double x) {
      const double k = 2.0 * x / window.h;
      const double r = std::round(k);
      if (std::abs(k - r) > 1e-6) {
        throw Error(path.string() + ":" + std::to_string(lineno) + ": coordinate is not a lattice node");
      }
      return static_cast<int>(r);
    };
    const auto idx = window.find(half_index(vals[0]), window.dim == 2 ? half_index(vals[1]) : 0);
    if (!idx) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": node outside the window");
    }
    u[*idx] = vals.back();
  }
  return u;
}

void write_json(const json& j, const std::filesystem::path& path) {
  make_parent(path);
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  f << j.dump(2) << "\n";
  if (!f) {
    throw Error("write to " + path.string() + " failed");
  }
}

json to_json(const FirstEigenpair& r) {
  return {{"lambda1", r.lambda1}, {"residual", r.residual}, {"iterations", r.iterations}, {"converged", r.converged}};
}

json to_json(const EigenReport& r) {
  return {{"schema_version", kReportSchemaVersion},
          {"lambda1", r.lambda1},
          {"mu2", r.mu2},
          {"quotients", {{"plus", r.quotient_plus}, {"minus", r.quotient_minus}}},
          {"residuals", {{"plus", r.residual_plus}, {"minus", r.residual_minus}, {"stationarity", r.stationarity}}},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"multistart_id", r.multistart_id},
          {"multistarts", outcomes_json(r.outcomes)},
          {"window", grid_json(r.u2)}};
}

json to_json(const SecondEigenCheck& r) {
  return {{"residual_plus", r.residual_plus}, {"residual_minus", r.residual_minus}, {"rel_plus", r.rel_plus},
          {"rel_minus", r.rel_minus},         {"identities_ok", r.identities_ok},   {"has_reference", r.has_reference},
          {"comparison_ok", r.comparison_ok}, {"equivalent", r.equivalent}};
}

json to_json(const NehariScale& r) {
  return {{"t_plus", r.t_plus},
          {"t_minus", r.t_minus},
          {"residual_plus", r.residual_plus},
          {"residual_minus", r.residual_minus},
          {"iterations", r.iterations},
          {"newton", r.newton}};
}

json to_json(const LensReport& r) {
  return {{"schema_version", kReportSchemaVersion},
          {"level", r.level},
          {"residuals", {{"plus", r.residual_plus}, {"minus", r.residual_minus}, {"stationarity", r.stationarity}}},
          {"g_identity_gap", r.g_identity_gap},
          {"scale", r.scale},
          {"reprojection", to_json(r.reprojection)},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"multistart_id", r.multistart_id},
          {"multistarts", outcomes_json(r.outcomes)},
          {"window", grid_json(r.u)}};
}

json to_json(const GroundState& r) {
  return {{"level", r.level},
          {"residual", r.residual},
          {"stationarity", r.stationarity},
          {"iterations", r.iterations},
          {"converged", r.converged}};
}

json to_json(const LensCheck& r) {
  return {{"F", {{"candidate", r.F_v}, {"reference", r.F_u}, {"ok", r.F_ok}}},
          {"f_plus", {{"candidate", r.f_plus_v}, {"reference", r.f_plus_u}}},
          {"f_minus", {{"candidate", r.f_minus_v}, {"reference", r.f_minus_u}}},
          {"f_ok", r.f_ok},
          {"pairing_plus", {{"candidate", r.pair_plus_v}, {"reference", r.pair_plus_u}}},
          {"pairing_minus", {{"candidate", r.pair_minus_v}, {"reference", r.pair_minus_u}}},
          {"pairing_ok", r.pairing_ok},
          {"ok", r.ok}};
}

json to_json(const PayneReport& r) {
  json sweep = json::array();
  for (const auto& e : r.sweep) {
    sweep.push_back({{"half_steps", e.half_steps},
                     {"a", e.a},
                     {"deficit_plus", e.deficit_plus},
                     {"deficit_minus", e.deficit_minus},
                     {"seminorm_deficit", e.seminorm_deficit},
                     {"eps_num", e.eps_num},
                     {"equality", e.equality},
                     {"ok", e.ok}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"mode", r.mode},
          {"value", r.value},
          {"iterations", r.iterations},
          {"h", r.h},
          {"threshold", r.threshold},
          {"tau", r.tau},
          {"counts", {{"plus", r.n_plus}, {"minus", r.n_minus}, {"nodal", r.n_nodal}}},
          {"support_distance", {{"plus", r.dist_plus}, {"minus", r.dist_minus}}},
          {"nodal_distance", r.dist_nodal},
          {"slide_distance", {{"plus", r.slide_plus}, {"minus", r.slide_minus}}},
          {"lid_touch", {{"plus", lid_json(r.lid_plus)}, {"minus", lid_json(r.lid_minus)}}},
          {"connected", r.connected},
          {"supports_touch", r.supports_touch},
          {"nodal_touch", r.nodal_touch},
          {"lid_consistent", r.lid_consistent},
          {"sweep", sweep},
          {"sweep_ok", r.sweep_ok},
          {"ok", r.ok},
          {"window", grid_json(r.u)}};
}

json to_json(const IdentityReport& r) {
  return {{"expansion_violations", r.expansion_violations},
          {"decomposition_violations", r.decomposition_violations},
          {"sums_before", r.sums_before},
          {"sums_after", r.sums_after},
          {"max_sum_rel_diff", r.max_sum_rel_diff},
          {"ok", r.ok()}};
}

json to_json(const PairingDeficit& r) {
  return {{"deficit_plus", r.deficit_plus}, {"deficit_minus", r.deficit_minus},
          {"seminorm_deficit", r.seminorm_deficit}, {"eps_num", r.eps_num},
          {"eps_eq", r.eps_eq},                 {"tail_term", r.tail_term},
          {"scale", r.scale}};
}

json to_json(const EqualityReport& r) {
  return {{"class", to_string(r.cls)}, {"deficits", to_json(r.deficits)}};
}

} // namespace fraclap
