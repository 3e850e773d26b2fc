#include "figures.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "becsim/coherent.hpp"
#include "becsim/jump.hpp"
#include "becsim/rng.hpp"
#include "becsim/theory.hpp"
#include "becsim/trajectory.hpp"

namespace becsim::tools {

namespace {

constexpr double kPi = std::numbers::pi;
namespace th = becsim::theory;
using io::SeriesRow;

void parallel_for(long count, int workers, const std::function<void(long)>& f) {
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<long> next{0};
  auto work = [&]() {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= count) break;
      f(i);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
}

void append_curve(std::vector<SeriesRow>& rows, const std::string& name,
                  const EnsembleCurve& curve) {
  for (const EnsemblePoint& p : curve.points) {
    rows.push_back({name, p.x, p.mean, p.stderr_, p.n});
  }
}

void append_analytic(std::vector<SeriesRow>& rows, const std::string& name,
                     double x, double value) {
  rows.push_back({name, x, value, 0.0, 0});
}

std::string trim_num(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

// Average visibility vs detection count with the analytic e^{-1/k} and the
// exact equal-position curve.
std::vector<SeriesRow> fig2(const FigureRequest& req) {
  const long n_traj = req.n_traj > 0 ? req.n_traj : 2000;
  SimConfig cfg;
  cfg.n1 = 100;
  cfg.n2 = 100;
  cfg.gamma = req.gamma;
  cfg.seed = req.seed;
  cfg.stop = 20;
  for (int k = 1; k <= 20; ++k) cfg.record_at.push_back(k);
  const auto curves = run_ensemble(cfg, n_traj, req.workers);

  std::vector<SeriesRow> rows;
  append_curve(rows, "exact_mc", curves.at("beta"));
  for (int k = 1; k <= 20; ++k) {
    append_analytic(rows, "equal_position", k,
                    th::oracle_beta_equalpos(100, k));
    append_analytic(rows, "approx", k, th::beta_equalpos_approx(k));
  }
  return rows;
}

// Average visibility vs the initial occupation split at fixed total 100,
// after 5 and after 99 detections.
std::vector<SeriesRow> fig3(const FigureRequest& req) {
  const long n_traj = req.n_traj > 0 ? req.n_traj : 2000;
  const int n_total = 100;
  std::vector<double> mean5(n_total + 1), se5(n_total + 1);
  std::vector<double> mean99(n_total + 1), se99(n_total + 1);
  std::vector<long> n5(n_total + 1), n99(n_total + 1);

  parallel_for(n_total + 1, req.workers, [&](long n2) {
    SimConfig cfg;
    cfg.n1 = int(n_total - n2);
    cfg.n2 = int(n2);
    cfg.gamma = req.gamma;
    cfg.seed = mix_seed(req.seed, 1000 + std::uint64_t(n2));
    cfg.stop = 99;
    cfg.record_at = {5.0, 99.0};
    // trajectories already parallel across n2 values
    const auto curves = run_ensemble(cfg, n_traj, 1);
    const auto& pts = curves.at("beta").points;
    mean5[n2] = pts[0].mean;
    se5[n2] = pts[0].stderr_;
    n5[n2] = pts[0].n;
    mean99[n2] = pts[1].mean;
    se99[n2] = pts[1].stderr_;
    n99[n2] = pts[1].n;
  });

  std::vector<SeriesRow> rows;
  for (int n2 = 0; n2 <= n_total; ++n2) {
    rows.push_back({"exact_k99", double(n2), mean99[n2], se99[n2], n99[n2]});
  }
  for (int n2 = 0; n2 <= n_total; ++n2) {
    rows.push_back({"exact_k5", double(n2), mean5[n2], se5[n2], n5[n2]});
  }
  for (int n2 = 0; n2 <= n_total; ++n2) {
    append_analytic(rows, "approx_k99", n2,
                    th::beta_unequal_approx(n_total - n2, n2, 99));
    append_analytic(rows, "approx_k5", n2,
                    th::beta_unequal_approx(n_total - n2, n2, 5));
  }
  return rows;
}

// Maximum coherent-state overlap vs the detected fraction k/N for equal
// and unequal initial occupations, with the quarter-circle approximation.
std::vector<SeriesRow> fig4(const FigureRequest& req) {
  const long n_traj = req.n_traj > 0 ? req.n_traj : 2000;
  std::vector<SeriesRow> rows;

  const auto run_case = [&](int n1, int n2, const std::string& name,
                            std::uint64_t salt) {
    const int n_total = n1 + n2;
    SimConfig cfg;
    cfg.n1 = n1;
    cfg.n2 = n2;
    cfg.gamma = req.gamma;
    cfg.seed = mix_seed(req.seed, salt);
    cfg.record_beta = false;
    cfg.record_max_overlap = true;
    for (int j = 0; j <= 20; ++j) {
      cfg.record_at.push_back(std::round(j * n_total / 20.0));
    }
    const auto curves = run_ensemble(cfg, n_traj, req.workers);
    for (const EnsemblePoint& p : curves.at("max_overlap").points) {
      rows.push_back({name, p.x / n_total, p.mean, p.stderr_, p.n});
    }
  };
  run_case(100, 100, "mc_100_100", 1);
  run_case(200, 50, "mc_200_50", 2);

  for (int j = 0; j <= 20; ++j) {
    const double x = j / 20.0;  // detected fraction
    append_analytic(rows, "approx", x,
                    std::sqrt(std::max(0.0, x * (2.0 - x))));
  }
  return rows;
}

// Phase-state overlap profiles P(phi) after 10, 100 and 190 detections
// from |100,100>, averaged over trajectories, with the Gaussian
// approximation. The relative phase each trajectory establishes is random,
// so profiles are centered on the trajectory's own fringe phase theta/2
// (a phase state |phi0> has theta = 2 phi0) before averaging; without that
// the ensemble mean would be flat by symmetry.
std::vector<SeriesRow> fig5(const FigureRequest& req) {
  const long n_traj = req.n_traj > 0 ? req.n_traj : 1000;
  const int n = 100;
  constexpr int kProfilePts = 161;  // phi in [-pi/2, pi/2]
  std::vector<SeriesRow> rows;

  for (const int k : {10, 100, 190}) {
    std::vector<std::vector<double>> profiles(n_traj);
    parallel_for(n_traj, req.workers, [&](long i) {
      SimConfig cfg;
      cfg.n1 = n;
      cfg.n2 = n;
      cfg.gamma = req.gamma;
      cfg.seed = mix_seed(mix_seed(req.seed, std::uint64_t(k)),
                          std::uint64_t(i));
      cfg.stop = k;
      cfg.record_at = {double(k)};
      cfg.record_beta = false;
      cfg.record_snapshot = true;
      const TrajectoryResult r = run_trajectory(cfg);
      const TwoModeFockState& state = r.recorded.snapshots.at(0);
      const double center = 0.5 * fringe_stats(state).theta;
      std::vector<double> prof(kProfilePts);
      for (int j = 0; j < kProfilePts; ++j) {
        const double phi = center - kPi / 2 + kPi * j / (kProfilePts - 1);
        const double r2 = 1.0 / std::sqrt(2.0);
        prof[j] = overlap_with(state, ModePair(std::polar(r2, phi),
                                               std::polar(r2, -phi)));
      }
      profiles[i] = std::move(prof);
    });

    const std::string mc_name = "mc_k" + std::to_string(k);
    const std::string ap_name = "approx_k" + std::to_string(k);
    for (int j = 0; j < kProfilePts; ++j) {
      const double phi = -kPi / 2 + kPi * j / (kProfilePts - 1);
      double sum = 0.0;
      for (long i = 0; i < n_traj; ++i) sum += profiles[i][j];
      const double mean = sum / double(n_traj);
      double var = 0.0;
      for (long i = 0; i < n_traj; ++i) {
        var += (profiles[i][j] - mean) * (profiles[i][j] - mean);
      }
      var = n_traj > 1 ? var / double(n_traj - 1) : 0.0;
      rows.push_back(
          {mc_name, phi, mean, std::sqrt(var / double(n_traj)), n_traj});
    }
    for (int j = 0; j < kProfilePts; ++j) {
      const double phi = -kPi / 2 + kPi * j / (kProfilePts - 1);
      append_analytic(rows, ap_name, phi, th::pphi_approx(n, k, phi));
    }
  }
  return rows;
}

// Visibility vs detection count with collisions, three kappa/gamma ratios,
// against the steady-state balance approximation.
std::vector<SeriesRow> fig6(const FigureRequest& req) {
  const long n_traj = req.n_traj > 0 ? req.n_traj : 1000;
  const int n = 100;
  std::vector<SeriesRow> rows;
  std::uint64_t salt = 0;
  for (const double ratio : {0.5, 2.0, 5.0}) {
    SimConfig cfg;
    cfg.n1 = n;
    cfg.n2 = n;
    cfg.gamma = req.gamma;
    cfg.kappa = ratio * req.gamma;
    cfg.seed = mix_seed(req.seed, ++salt);
    cfg.stop = 199;
    for (int k = 1; k <= 199; ++k) cfg.record_at.push_back(k);
    const auto curves = run_ensemble(cfg, n_traj, req.workers);
    append_curve(rows, "mc_kappa_" + trim_num(ratio), curves.at("beta"));
    for (int k = 1; k <= 199; ++k) {
      append_analytic(rows, "steady_kappa_" + trim_num(ratio), k,
                      th::beta_steady(n, k, req.gamma, cfg.kappa));
    }
  }
  return rows;
}

// Maximum coherent-state overlap vs detection count with collisions, with
// the Lorentzian-root decay evaluated at the mean detection time.
std::vector<SeriesRow> fig7(const FigureRequest& req) {
  const long n_traj = req.n_traj > 0 ? req.n_traj : 1000;
  const int n = 100;
  std::vector<SeriesRow> rows;
  std::uint64_t salt = 100;
  for (const double ratio : {0.1, 0.5, 5.0}) {
    SimConfig cfg;
    cfg.n1 = n;
    cfg.n2 = n;
    cfg.gamma = req.gamma;
    cfg.kappa = ratio * req.gamma;
    cfg.seed = mix_seed(req.seed, ++salt);
    cfg.record_beta = false;
    cfg.record_max_overlap = true;
    for (int k = 0; k <= 200; k += 10) cfg.record_at.push_back(k);
    const auto curves = run_ensemble(cfg, n_traj, req.workers);
    append_curve(rows, "mc_kappa_" + trim_num(ratio),
                 curves.at("max_overlap"));
    for (int k = 10; k <= 190; k += 10) {
      // mean time at which the k-th atom has left, from the decay law
      const double t_k =
          -std::log(1.0 - double(k) / (2.0 * n)) / (2.0 * req.gamma);
      append_analytic(rows, "decay_kappa_" + trim_num(ratio), k,
                      th::max_overlap_decay(n, k, cfg.kappa, t_k));
    }
  }
  return rows;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> figure_registry() {
  return {
      {"fig2", "average visibility vs detection count, |100,100>"},
      {"fig3", "average visibility vs occupation split, total 100, k=5/99"},
      {"fig4", "max coherent-state overlap vs detected fraction"},
      {"fig5", "phase-state overlap profile P(phi) after k=10/100/190"},
      {"fig6", "visibility vs detections with collisions, kappa=0.5/2/5"},
      {"fig7", "max overlap vs detections with collisions, kappa=0.1/0.5/5"},
  };
}

std::vector<io::SeriesRow> figure_bundle(const FigureRequest& req) {
  if (req.id == "fig2") return fig2(req);
  if (req.id == "fig3") return fig3(req);
  if (req.id == "fig4") return fig4(req);
  if (req.id == "fig5") return fig5(req);
  if (req.id == "fig6") return fig6(req);
  if (req.id == "fig7") return fig7(req);
  throw std::invalid_argument("unknown figure id '" + req.id + "'");
}

}  // namespace becsim::tools
