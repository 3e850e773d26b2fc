#include "becsim/trajectory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "becsim/coherent.hpp"
#include "becsim/jump.hpp"
#include "becsim/rng.hpp"

namespace becsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

class Recorder {
 public:
  Recorder(const SimConfig& cfg, const std::vector<double>& points)
      : cfg_(cfg) {
    out_.x = points;
    out_.beta.assign(points.size(), kNaN);
    out_.max_overlap.assign(points.size(), kNaN);
    out_.atoms.assign(points.size(), kNaN);
  }

  void capture(std::size_t index, const TwoModeFockState& state) {
    if (cfg_.record_beta && state.total_atoms() >= 1) {
      out_.beta[index] = fringe_stats(state).beta_c;
    }
    if (cfg_.record_max_overlap) {
      out_.max_overlap[index] = max_overlap(state).p_max;
    }
    if (cfg_.record_atoms) {
      out_.atoms[index] = double(state.total_atoms());
    }
    if (cfg_.record_snapshot) {
      if (out_.snapshots.size() < index + 1) {
        out_.snapshots.resize(index + 1, state);
      }
      out_.snapshots[index] = state;
    }
  }

  RecordedObservables take() { return std::move(out_); }

 private:
  const SimConfig& cfg_;
  RecordedObservables out_;
};

}  // namespace

void SimConfig::validate() const {
  if (n1 < 0 || n2 < 0) {
    throw std::invalid_argument("config: occupations must be non-negative");
  }
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("config: gamma must be positive");
  }
  if (kappa < 0.0) {
    throw std::invalid_argument("config: kappa must be non-negative");
  }
  if (eta < 0.0 || eta > 1.0) {
    throw std::invalid_argument("config: eta must lie in [0, 1]");
  }
  if (axis == RecordAxis::time && stop < 0.0) {
    throw std::invalid_argument("config: time axis requires a stop time");
  }
  for (double r : record_at) {
    if (r < 0.0) {
      throw std::invalid_argument("config: record points must be >= 0");
    }
    if (axis == RecordAxis::detection_count &&
        r != std::floor(r)) {
      throw std::invalid_argument(
          "config: count-axis record points must be integers");
    }
  }
}

double SimConfig::stop_value() const {
  if (axis == RecordAxis::detection_count && stop < 0.0) {
    return double(n1 + n2);
  }
  return stop;
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::interfering:
      return "interfering";
    case EventKind::loss_a:
      return "loss_a";
    case EventKind::loss_b:
      return "loss_b";
  }
  return "?";
}

TrajectoryResult run_trajectory(const SimConfig& cfg) {
  cfg.validate();
  const std::vector<double> points = sorted_unique(cfg.record_at);
  const bool count_axis = cfg.axis == RecordAxis::detection_count;
  const double stop = cfg.stop_value();

  Rng rng(cfg.seed);
  TwoModeFockState state = number_state(cfg.n1, cfg.n2);
  double t = 0.0;
  long k = 0;
  std::size_t next_point = 0;

  TrajectoryResult result;
  Recorder recorder(cfg, points);

  // Record points at the origin (k = 0 / t = 0) refer to the initial state.
  while (next_point < points.size() && points[next_point] <= 0.0) {
    recorder.capture(next_point, state);
    ++next_point;
  }

  auto record_count_point = [&]() {
    while (next_point < points.size() && points[next_point] <= double(k)) {
      if (std::lround(points[next_point]) == k) {
        recorder.capture(next_point, state);
      }
      ++next_point;
    }
  };

  while (true) {
    if (count_axis && double(k) >= stop) break;
    const int m_total = state.total_atoms();
    if (m_total == 0) {
      // Nothing further happens; time-axis record points beyond the last
      // jump see the vacuum.
      if (!count_axis) {
        while (next_point < points.size()) {
          recorder.capture(next_point, state);
          ++next_point;
        }
      }
      break;
    }

    const double rate = 2.0 * cfg.gamma * double(m_total);
    const double dt = exponential(rng, rate);
    const double t_jump = t + dt;
    const double horizon = count_axis ? t_jump : std::min(t_jump, stop);

    // Capture time-axis observables inside (t, horizon], advancing the
    // collision phases piecewise (phases compose additively, so this is
    // exact).
    if (!count_axis) {
      while (next_point < points.size() && points[next_point] <= horizon) {
        const double t_rec = points[next_point];
        if (cfg.kappa > 0.0 && t_rec > t) {
          state = apply_collision_phase(state, cfg.kappa, t_rec - t);
          t = t_rec;
        }
        recorder.capture(next_point, state);
        ++next_point;
      }
    }
    if (!count_axis && t_jump > stop) {
      t = stop;
      break;
    }
    if (cfg.kappa > 0.0 && t_jump > t) {
      state = apply_collision_phase(state, cfg.kappa, t_jump - t);
    }
    t = t_jump;

    // Efficiency branch first, then the channel-specific draw.
    DetectionEvent event;
    if (!count_axis) event.time = t;
    if (uniform_double(rng) < cfg.eta) {
      const FringeStats fringe = fringe_stats(state);
      const double phi = sample_position(fringe, rng);
      state = apply_interference_jump(state, phi);
      event.kind = EventKind::interfering;
      event.phi = phi;
    } else {
      const auto [na, nb] = mode_occupations(state);
      const double p_a = na / double(m_total);
      if (uniform_double(rng) < p_a) {
        state = apply_loss_jump(state, Mode::a);
        event.kind = EventKind::loss_a;
      } else {
        state = apply_loss_jump(state, Mode::b);
        event.kind = EventKind::loss_b;
      }
    }
    state = normalized(state);
    ++k;
    result.events.push_back(event);

    if (count_axis) record_count_point();
  }

  result.recorded = recorder.take();
  result.final_state = state;
  return result;
}

std::map<std::string, EnsembleCurve> run_ensemble(const SimConfig& cfg,
                                                  long n_traj, int workers) {
  cfg.validate();
  if (n_traj < 1) {
    throw std::invalid_argument("ensemble: need at least one trajectory");
  }
  if (cfg.record_snapshot) {
    throw std::invalid_argument(
        "ensemble: state snapshots cannot be aggregated");
  }
  if (workers < 1) workers = 1;

  const std::vector<double> points = sorted_unique(cfg.record_at);
  const std::size_t n_points = points.size();

  struct Slot {
    std::vector<double> beta, max_overlap, atoms;
  };
  std::vector<Slot> per_traj(n_traj);

  std::atomic<long> next{0};
  auto work = [&]() {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= n_traj) break;
      SimConfig local = cfg;
      local.record_at = points;
      local.seed = mix_seed(cfg.seed, std::uint64_t(i));
      TrajectoryResult r = run_trajectory(local);
      per_traj[i].beta = std::move(r.recorded.beta);
      per_traj[i].max_overlap = std::move(r.recorded.max_overlap);
      per_traj[i].atoms = std::move(r.recorded.atoms);
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // Reduction in trajectory order: independent of scheduling.
  auto reduce = [&](auto member) {
    EnsembleCurve curve;
    curve.axis = cfg.axis;
    curve.points.resize(n_points);
    for (std::size_t j = 0; j < n_points; ++j) {
      double sum = 0.0;
      long n = 0;
      for (long i = 0; i < n_traj; ++i) {
        const double v = (per_traj[i].*member)[j];
        if (std::isfinite(v)) {
          sum += v;
          ++n;
        }
      }
      const double mean = n > 0 ? sum / double(n) : kNaN;
      double var = 0.0;
      if (n > 1) {
        for (long i = 0; i < n_traj; ++i) {
          const double v = (per_traj[i].*member)[j];
          if (std::isfinite(v)) {
            var += (v - mean) * (v - mean);
          }
        }
        var /= double(n - 1);
      }
      curve.points[j] = {points[j], mean,
                         n > 0 ? std::sqrt(var / double(n)) : kNaN, n};
    }
    return curve;
  };

  std::map<std::string, EnsembleCurve> out;
  if (cfg.record_beta) out["beta"] = reduce(&Slot::beta);
  if (cfg.record_max_overlap) out["max_overlap"] = reduce(&Slot::max_overlap);
  if (cfg.record_atoms) out["atoms"] = reduce(&Slot::atoms);
  return out;
}

TwoModeFockState equal_position_state(int n, int k, double phi) {
  if (n < 0 || k < 0 || k > 2 * n) {
    throw std::invalid_argument(
        "equal_position_state: need 0 <= k <= 2n");
  }
  TwoModeFockState state = number_state(n, n);
  for (int j = 0; j < k; ++j) {
    state = normalized(apply_interference_jump(state, phi));
  }
  return state;
}

}  // namespace becsim
