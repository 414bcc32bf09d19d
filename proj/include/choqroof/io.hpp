#pragma once

#include <optional>
#include <string>
#include <utility>

#include "json.hpp"

#include "choqroof/choquet.hpp"
#include "choqroof/functionals.hpp"
#include "choqroof/states.hpp"

namespace choqroof {

using Json = nlohmann::ordered_json;

/// Rounds through a 12-significant-digit decimal representation, mapping -0
/// to 0. All numbers put into reports pass through here so identical runs
/// serialize byte for byte.
double round12(double x);

/// Deterministic two-space-indented dump that keeps short primitive arrays
/// (complex entries, matrix rows) on one line. Ends with a newline.
std::string pretty_json(const Json& j);

struct LoadedState {
  DensityMatrix state;
  std::optional<std::pair<int, int>> dims;
};

Json matrix_to_json(const Matrix& m);
Json state_to_json(const DensityMatrix& rho,
                   std::optional<std::pair<int, int>> dims = std::nullopt);
Json ensemble_to_json(const Ensemble& e);
Json plan_to_json(const TransitionPlan& plan);

/// Parsers throw ValidationError naming the offending field.
LoadedState parse_state(const Json& j);
Ensemble parse_ensemble(const Json& j);
KrausChannel parse_channel(const Json& j);

Json load_json(const std::string& path);
LoadedState load_state(const std::string& path);
Ensemble load_ensemble(const std::string& path);
KrausChannel load_channel(const std::string& path);

void write_text(const std::string& path, const std::string& text);

}  // namespace choqroof
