#pragma once

#include "fraclap/eigensolver.hpp"
#include "fraclap/grid_function.hpp"
#include "fraclap/inequalities.hpp"
#include "fraclap/nehari.hpp"
#include "fraclap/payne.hpp"
#include "fraclap/polarization.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace fraclap {

// Version of every JSON report written by the CLI.
inline constexpr int kReportSchemaVersion = 1;

// CSV with header "x1,value" (1D) or "x1,x2,value" (2D), one row per window node, sorted by
// (x1, x2), numbers printed with %.17g.
std::string grid_csv(const GridFunction& u);
void write_grid_csv(const GridFunction& u, const std::filesystem::path& path);
// Rows must sit on nodes of `window`; nodes that are not listed are 0.
GridFunction read_grid_csv(const std::filesystem::path& path, const Window& window);

// Pretty-printed with sorted keys; throws Error with the path on I/O failure.
void write_json(const nlohmann::json& j, const std::filesystem::path& path);

nlohmann::json to_json(const FirstEigenpair& r);
nlohmann::json to_json(const EigenReport& r);
nlohmann::json to_json(const SecondEigenCheck& r);
nlohmann::json to_json(const NehariScale& r);
nlohmann::json to_json(const LensReport& r);
nlohmann::json to_json(const GroundState& r);
nlohmann::json to_json(const LensCheck& r);
nlohmann::json to_json(const PayneReport& r);
nlohmann::json to_json(const IdentityReport& r);
nlohmann::json to_json(const PairingDeficit& r);
nlohmann::json to_json(const EqualityReport& r);

} // namespace fraclap
