#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "becsim/fock.hpp"

namespace becsim {

/// Axis along which a run stops and records: number of emitted atoms, or
/// physical time. The dynamics is identical in both; only stopping and
/// recording differ.
enum class RecordAxis { detection_count, time };

struct SimConfig {
  int n1 = 0;
  int n2 = 0;
  double gamma = 1.0;  // single-atom intensity decay rate is 2*gamma
  double kappa = 0.0;  // collision rate; 0 disables dephasing
  double eta = 1.0;    // detector efficiency
  std::uint64_t seed = 0;
  RecordAxis axis = RecordAxis::detection_count;
  /// k_max (count axis) or t_max (time axis); negative means "until all
  /// atoms are gone" on the count axis.
  double stop = -1.0;
  /// Detection counts or times at which observables are captured;
  /// normalized to sorted/unique by validate().
  std::vector<double> record_at;

  bool record_beta = true;
  bool record_max_overlap = false;
  bool record_atoms = false;
  bool record_snapshot = false;

  void validate() const;
  double stop_value() const;  // resolves the count-axis default
};

enum class EventKind { interfering, loss_a, loss_b };

const char* to_string(EventKind kind);

struct DetectionEvent {
  std::optional<double> time;  // absent on the detection-count axis
  EventKind kind = EventKind::interfering;
  std::optional<double> phi;  // present iff interfering
};

/// Observables captured at the configured record points. All vectors are
/// aligned with SimConfig::record_at; entries are NaN where an observable
/// is undefined or the point was never reached.
struct RecordedObservables {
  std::vector<double> x;
  std::vector<double> beta;
  std::vector<double> max_overlap;
  std::vector<double> atoms;
  std::vector<TwoModeFockState> snapshots;  // only if record_snapshot
};

struct TrajectoryResult {
  std::vector<DetectionEvent> events;
  RecordedObservables recorded;
  TwoModeFockState final_state{Eigen::VectorXcd::Ones(1)};
};

/// One quantum-jump unraveling: exponential waiting times at rate
/// 2 gamma M, collision dephasing between jumps, detector-efficiency
/// branching into interfering detections (position sampled from the state
/// fringe) or occupation-weighted single-mode losses, renormalizing after
/// every jump.
TrajectoryResult run_trajectory(const SimConfig& config);

struct EnsemblePoint {
  double x = 0.0;
  double mean = 0.0;
  double stderr_ = 0.0;  // sample std / sqrt(n)
  long n = 0;
};

struct EnsembleCurve {
  RecordAxis axis = RecordAxis::detection_count;
  std::vector<EnsemblePoint> points;
};

/// Runs n_traj independent trajectories with per-index seeds derived from
/// config.seed via mix_seed and aggregates the scalar observables. Keys:
/// "beta", "max_overlap", "atoms" (those enabled in the config). Results
/// are bitwise independent of the worker count.
std::map<std::string, EnsembleCurve> run_ensemble(const SimConfig& config,
                                                  long n_traj, int workers);

/// (a + b)^k-style reference state: k interference jumps at the same
/// position phi applied to |n,n>, renormalized along the way.
TwoModeFockState equal_position_state(int n, int k, double phi);

}  // namespace becsim
