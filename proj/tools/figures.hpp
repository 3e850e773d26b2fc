#pragma once

#include <string>
#include <vector>

#include "becsim/io.hpp"

namespace becsim::tools {

struct FigureRequest {
  std::string id;        // fig2 .. fig7
  long n_traj = -1;      // -1: per-figure default
  int workers = 1;
  std::uint64_t seed = 12345;
  double gamma = 1.0;
};

/// Every data series needed to re-plot one of the paper-style figures,
/// Monte Carlo curves plus their analytic comparison series.
std::vector<io::SeriesRow> figure_bundle(const FigureRequest& request);

/// ids accepted by figure_bundle, with one-line descriptions.
std::vector<std::pair<std::string, std::string>> figure_registry();

}  // namespace becsim::tools
