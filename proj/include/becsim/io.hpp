#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "becsim/trajectory.hpp"

#include <nlohmann/json_fwd.hpp>

namespace becsim::io {

/// Shortest-faithful decimal rendering of a double ("%.17g"); used for all
/// CSV output so that reruns compare bytewise.
std::string format_double(double v);

/// Curve CSV with header "x,mean,stderr,n".
void write_curve_csv(std::ostream& os, const EnsembleCurve& curve);

/// One figure-bundle row; analytic series carry stderr = 0 and n = 0.
struct SeriesRow {
  std::string series;
  double x = 0.0;
  double mean = 0.0;
  double stderr_ = 0.0;
  long n = 0;
};

/// Bundle CSV with header "series,x,mean,stderr,n".
void write_bundle_csv(std::ostream& os, const std::vector<SeriesRow>& rows);

nlohmann::json config_to_json(const SimConfig& config);
nlohmann::json events_to_json(const std::vector<DetectionEvent>& events);
nlohmann::json recorded_to_json(const SimConfig& config,
                                const RecordedObservables& recorded);

/// Flat key=value text mirroring the SimConfig field names; one key per
/// line. Round-trips through parse_config_text.
std::string config_to_text(const SimConfig& config);
SimConfig parse_config_text(const std::string& text);

/// FNV-1a 64-bit digest, hex-encoded; used for output checksums in run
/// manifests.
std::string fnv1a_hex(const std::string& bytes);

/// Manifest written next to every file output: config echo, version,
/// master seed, wall-clock duration and per-file checksums. The manifest is
/// the one output allowed to differ between identical reruns.
nlohmann::json make_manifest(const SimConfig& config,
                             const std::string& version, double duration_sec,
                             const std::map<std::string, std::string>& sums);

}  // namespace becsim::io
