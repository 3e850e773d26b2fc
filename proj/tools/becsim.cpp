#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "becsim/io.hpp"
#include "becsim/theory.hpp"
#include "becsim/trajectory.hpp"
#include "becsim/version.hpp"
#include "figures.hpp"

namespace {

using namespace becsim;
namespace th = becsim::theory;
namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "1..20", "0..200:10", "1,5,9" and combinations thereof.
std::vector<double> parse_points(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const auto dots = token.find("..");
    if (dots == std::string::npos) {
      out.push_back(std::stod(token));
      continue;
    }
    const std::string first = token.substr(0, dots);
    std::string rest = token.substr(dots + 2);
    double step = 1.0;
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
      step = std::stod(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    const double lo = std::stod(first);
    const double hi = std::stod(rest);
    if (step <= 0.0 || hi < lo) {
      throw ConfigError("bad range '" + token + "'");
    }
    for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
  }
  return out;
}

// kappa accepts a plain rate or a multiple of gamma ("5g").
double parse_kappa(std::string text, double gamma) {
  if (!text.empty() && (text.back() == 'g' || text.back() == 'G')) {
    text.pop_back();
    return std::stod(text) * gamma;
  }
  return std::stod(text);
}

int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

struct SimFlags {
  int n1 = 0;
  int n2 = 0;
  double gamma = 1.0;
  std::string kappa = "0";
  double eta = 1.0;
  std::uint64_t seed = 12345;
  long k_max = -1;
  double t_max = -1.0;
  std::string record_k;
  std::string record_t;
  std::string observables = "beta";
  std::string config_path;

  std::map<std::string, CLI::Option*> opts;

  void attach(CLI::App* cmd) {
    opts["n1"] = cmd->add_option("--n1", n1, "Initial atoms in condensate a");
    opts["n2"] = cmd->add_option("--n2", n2, "Initial atoms in condensate b");
    opts["gamma"] =
        cmd->add_option("--gamma", gamma, "Single-atom decay rate (default 1)");
    opts["kappa"] = cmd->add_option(
        "--kappa", kappa, "Collision rate; suffix 'g' means multiples of gamma");
    opts["eta"] = cmd->add_option("--eta", eta, "Detector efficiency in [0,1]");
    opts["seed"] = cmd->add_option("--seed", seed, "Master seed");
    opts["k_max"] = cmd->add_option("--k-max", k_max,
                                    "Stop after this many emitted atoms");
    opts["t_max"] = cmd->add_option("--t-max", t_max, "Stop at this time");
    opts["record_k"] =
        cmd->add_option("--record-k", record_k,
                        "Detection counts to record at, e.g. 1..20 or 1,5,9");
    opts["record_t"] = cmd->add_option("--record-t", record_t,
                                       "Times to record at");
    opts["obs"] = cmd->add_option("--obs", observables,
                                  "Comma list of beta,max_overlap,atoms,state");
    cmd->add_option("--config", config_path,
                    "Config file with key=value lines mirroring the "
                    "simulation fields; flags override file values");
  }

  bool given(const std::string& name) const {
    return opts.at(name)->count() > 0;
  }

  SimConfig resolve() const {
    SimConfig cfg;
    const bool have_file = !config_path.empty();
    if (have_file) {
      std::ifstream is(config_path);
      if (!is) throw ConfigError("cannot read config file " + config_path);
      std::ostringstream os;
      os << is.rdbuf();
      try {
        cfg = io::parse_config_text(os.str());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(config_path) + ": " + e.what());
      }
    } else if (!given("n1") || !given("n2")) {
      throw ConfigError("--n1 and --n2 are required (or pass --config)");
    }

    if (given("n1")) cfg.n1 = n1;
    if (given("n2")) cfg.n2 = n2;
    if (given("gamma")) cfg.gamma = gamma;
    if (given("kappa")) cfg.kappa = parse_kappa(kappa, cfg.gamma);
    if (given("eta")) cfg.eta = eta;
    if (given("seed")) cfg.seed = seed;

    const bool count_flags = given("k_max") || given("record_k");
    const bool time_flags = given("t_max") || given("record_t");
    if (count_flags && time_flags) {
      throw ConfigError("count-axis and time-axis flags are mutually "
                        "exclusive (--k-max/--record-k vs --t-max/--record-t)");
    }
    if (count_flags) {
      const bool was_count =
          have_file && cfg.axis == RecordAxis::detection_count;
      cfg.axis = RecordAxis::detection_count;
      if (given("k_max")) cfg.stop = double(k_max);
      else if (!was_count) cfg.stop = -1.0;
      if (given("record_k")) cfg.record_at = parse_points(record_k);
      else if (!was_count) cfg.record_at.clear();
    } else if (time_flags) {
      const bool was_time = have_file && cfg.axis == RecordAxis::time;
      cfg.axis = RecordAxis::time;
      if (given("t_max")) cfg.stop = t_max;
      else if (!was_time) throw ConfigError("time-axis runs need --t-max");
      if (given("record_t")) cfg.record_at = parse_points(record_t);
      else if (!was_time) cfg.record_at.clear();
    }

    if (given("obs") || !have_file) {
      cfg.record_beta = cfg.record_max_overlap = cfg.record_atoms =
          cfg.record_snapshot = false;
      std::stringstream ss(observables);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item == "beta") cfg.record_beta = true;
        else if (item == "max_overlap") cfg.record_max_overlap = true;
        else if (item == "atoms") cfg.record_atoms = true;
        else if (item == "state") cfg.record_snapshot = true;
        else if (!item.empty()) {
          throw ConfigError("unknown observable '" + item + "'");
        }
      }
    }
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    return cfg;
  }
};

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << bytes;
}

void write_manifest(const fs::path& path, const SimConfig& cfg,
                    double duration_sec,
                    const std::map<std::string, std::string>& files) {
  std::map<std::string, std::string> sums;
  for (const auto& [name, bytes] : files) sums[name] = io::fnv1a_hex(bytes);
  const json manifest =
      io::make_manifest(cfg, kVersion, duration_sec, sums);
  write_file(path, manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// trajectory

int run_trajectory_cmd(const SimFlags& flags, const std::string& out) {
  const SimConfig cfg = flags.resolve();
  const auto t0 = std::chrono::steady_clock::now();
  const TrajectoryResult result = run_trajectory(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  json j;
  j["config"] = io::config_to_json(cfg);
  j["events"] = io::events_to_json(result.events);
  j["observables"] = io::recorded_to_json(cfg, result.recorded);
  const std::string bytes = j.dump(2) + "\n";

  if (out == "-") {
    std::cout << bytes;
  } else {
    write_file(out, bytes);
    write_manifest(out + ".manifest.json", cfg, secs,
                   {{fs::path(out).filename().string(), bytes}});
  }
  return 0;
}

// ---------------------------------------------------------------------------
// ensemble

int run_ensemble_cmd(const SimFlags& flags, long n_traj, int workers,
                     const std::string& prefix) {
  const SimConfig cfg = flags.resolve();
  if (cfg.record_snapshot) {
    throw ConfigError("ensembles cannot aggregate state snapshots");
  }
  if (cfg.record_at.empty()) {
    throw ConfigError("ensemble runs need --record-k or --record-t");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto curves = run_ensemble(cfg, n_traj, workers);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  std::map<std::string, std::string> files;
  for (const auto& [name, curve] : curves) {
    std::ostringstream os;
    io::write_curve_csv(os, curve);
    const fs::path path = prefix + "_" + name + ".csv";
    write_file(path, os.str());
    files[path.filename().string()] = os.str();
  }
  write_manifest(prefix + ".manifest.json", cfg, secs, files);
  return 0;
}

// ---------------------------------------------------------------------------
// theory

struct TheoryArgs {
  long n = 0, n1 = 0, n2 = 0;
  double k = 0.0, t = 0.0, phi = 0.0;
  double eta = 1.0, gamma = 1.0, kappa = 0.0;
  int points = 512;
};

struct Formula {
  std::string signature;
  std::vector<std::string> needs;
  std::function<double(const TheoryArgs&)> eval;
};

const std::map<std::string, Formula>& formula_registry() {
  static const std::map<std::string, Formula> registry = {
      {"beta1",
       {"--n1 --n2", {"n1", "n2"},
        [](const TheoryArgs& a) { return th::mean_beta_after_1(a.n1, a.n2); }}},
      {"beta2",
       {"--n1 --n2", {"n1", "n2"},
        [](const TheoryArgs& a) { return th::mean_beta_after_2(a.n1, a.n2); }}},
      {"beta-equalpos",
       {"--k", {"k"},
        [](const TheoryArgs& a) { return th::beta_equalpos_approx(a.k); }}},
      {"beta-unequal",
       {"--n1 --n2 --k", {"n1", "n2", "k"},
        [](const TheoryArgs& a) {
          return th::beta_unequal_approx(a.n1, a.n2, a.k);
        }}},
      {"pphi",
       {"--n --k --phi", {"n", "k", "phi"},
        [](const TheoryArgs& a) { return th::pphi_approx(a.n, a.k, a.phi); }}},
      {"pphi-max",
       {"--n --k", {"n", "k"},
        [](const TheoryArgs& a) { return th::pphi_approx_max(a.n, a.k); }}},
      {"beta-imperfect",
       {"--k --eta", {"k", "eta"},
        [](const TheoryArgs& a) { return th::beta_imperfect(a.k, a.eta); }}},
      {"pphi-imperfect",
       {"--n --k --eta --phi", {"n", "k", "eta", "phi"},
        [](const TheoryArgs& a) {
          return th::pphi_imperfect(a.n, a.k, a.eta, a.phi);
        }}},
      {"mean-remaining",
       {"--n --gamma --t", {"n", "t"},
        [](const TheoryArgs& a) {
          return th::mean_remaining(a.n, a.gamma, a.t);
        }}},
      {"mean-detected",
       {"--n --gamma --t", {"n", "t"},
        [](const TheoryArgs& a) {
          return th::mean_detected(a.n, a.gamma, a.t);
        }}},
      {"beta-collision-acs",
       {"--n --kappa --t", {"n", "kappa", "t"},
        [](const TheoryArgs& a) {
          return th::beta_collision_acs(a.n, a.kappa, a.t);
        }}},
      {"beta-collision-psik",
       {"--n --k --kappa --t", {"n", "k", "kappa", "t"},
        [](const TheoryArgs& a) {
          return th::beta_collision_psik(a.n, a.k, a.kappa, a.t);
        }}},
      {"steady",
       {"--n --k --gamma --kappa", {"n", "k", "kappa"},
        [](const TheoryArgs& a) {
          return th::beta_steady(a.n, a.k, a.gamma, a.kappa);
        }}},
      {"overlap-decay",
       {"--n --k --kappa --t", {"n", "k", "kappa", "t"},
        [](const TheoryArgs& a) {
          return th::max_overlap_decay(a.n, a.k, a.kappa, a.t);
        }}},
      {"oracle-beta-equalpos",
       {"--n --k", {"n", "k"},
        [](const TheoryArgs& a) {
          return th::oracle_beta_equalpos(a.n, long(a.k));
        }}},
      {"oracle-mean-beta",
       {"--n1 --n2 --k [--points]", {"n1", "n2", "k"},
        [](const TheoryArgs& a) {
          return th::oracle_mean_beta_quadrature(a.n1, a.n2, int(a.k),
                                                 a.points);
        }}},
  };
  return registry;
}

std::string registry_listing() {
  std::ostringstream os;
  os << "available formulas:\n";
  for (const auto& [name, f] : formula_registry()) {
    os << "  " << name << "  " << f.signature << "\n";
  }
  return os.str();
}

struct TheoryFlags {
  std::string name;
  long n = 0, n1 = 0, n2 = 0;
  std::string k, t, phi;
  double eta = 1.0, gamma = 1.0;
  std::string kappa = "0";
  int points = 512;
  std::string out = "-";
  std::map<std::string, CLI::Option*> opts;

  void attach(CLI::App* cmd) {
    cmd->add_option("name", name, "Formula name (see listing on error)")
        ->required();
    opts["n"] = cmd->add_option("--n", n, "Atom number parameter");
    opts["n1"] = cmd->add_option("--n1", n1, "Initial atoms in mode a");
    opts["n2"] = cmd->add_option("--n2", n2, "Initial atoms in mode b");
    opts["k"] = cmd->add_option("--k", k, "Detections (rangeable: 1..200)");
    opts["t"] = cmd->add_option("--t", t, "Time (rangeable)");
    opts["phi"] = cmd->add_option("--phi", phi, "Angle (rangeable)");
    opts["eta"] = cmd->add_option("--eta", eta, "Detector efficiency");
    opts["gamma"] = cmd->add_option("--gamma", gamma, "Decay rate");
    opts["kappa"] = cmd->add_option("--kappa", kappa,
                                    "Collision rate ('g' = times gamma)");
    cmd->add_option("--points", points, "Quadrature nodes per axis");
    cmd->add_option("--out", out, "Output file for curves ('-' = stdout)");
  }
};

int run_theory_cmd(const TheoryFlags& flags) {
  const auto it = formula_registry().find(flags.name);
  if (it == formula_registry().end()) {
    std::cerr << "unknown formula '" << flags.name << "'\n"
              << registry_listing();
    return kExitConfig;
  }
  const Formula& formula = it->second;
  for (const std::string& need : formula.needs) {
    if (flags.opts.at(need)->count() == 0) {
      std::cerr << "formula '" << flags.name << "' needs " << formula.signature
                << "\n";
      return kExitConfig;
    }
  }

  TheoryArgs args;
  args.n = flags.n;
  args.n1 = flags.n1;
  args.n2 = flags.n2;
  args.eta = flags.eta;
  args.gamma = flags.gamma;
  args.kappa = parse_kappa(flags.kappa, flags.gamma);
  args.points = flags.points;

  const std::vector<double> ks =
      flags.k.empty() ? std::vector<double>{} : parse_points(flags.k);
  const std::vector<double> ts =
      flags.t.empty() ? std::vector<double>{} : parse_points(flags.t);
  const std::vector<double> phis =
      flags.phi.empty() ? std::vector<double>{} : parse_points(flags.phi);

  int ranges = 0;
  ranges += ks.size() > 1;
  ranges += ts.size() > 1;
  ranges += phis.size() > 1;
  if (ranges > 1) {
    std::cerr << "only one of --k/--t/--phi may be a range\n";
    return kExitConfig;
  }
  if (!ks.empty()) args.k = ks.front();
  if (!ts.empty()) args.t = ts.front();
  if (!phis.empty()) args.phi = phis.front();

  if (ranges == 0) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", formula.eval(args));
    std::cout << buf << "\n";
    return 0;
  }

  const std::vector<double>& sweep =
      ks.size() > 1 ? ks : (ts.size() > 1 ? ts : phis);
  EnsembleCurve curve;
  for (double x : sweep) {
    if (ks.size() > 1) args.k = x;
    else if (ts.size() > 1) args.t = x;
    else args.phi = x;
    curve.points.push_back({x, formula.eval(args), 0.0, 0});
  }
  std::ostringstream os;
  io::write_curve_csv(os, curve);
  if (flags.out == "-") {
    std::cout << os.str();
  } else {
    write_file(flags.out, os.str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// figure

int run_figure_cmd(const tools::FigureRequest& req, std::string prefix) {
  bool known = false;
  for (const auto& [id, _] : tools::figure_registry()) known |= (id == req.id);
  if (!known) {
    std::cerr << "unknown figure id '" << req.id << "'\navailable figures:\n";
    for (const auto& [id, desc] : tools::figure_registry()) {
      std::cerr << "  " << id << "  " << desc << "\n";
    }
    return kExitConfig;
  }
  if (prefix.empty()) prefix = req.id;

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<io::SeriesRow> rows = tools::figure_bundle(req);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  std::ostringstream os;
  io::write_bundle_csv(os, rows);
  const fs::path path = prefix + ".csv";
  write_file(path, os.str());

  SimConfig echo;  // figure inputs are fixed; echo the shared knobs
  echo.n1 = 100;
  echo.n2 = 100;
  echo.gamma = req.gamma;
  echo.seed = req.seed;
  write_manifest(prefix + ".manifest.json", echo, secs,
                 {{path.filename().string(), os.str()}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-jump simulator for two interfering leaky condensates"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SimFlags traj_flags;
  std::string traj_out = "-";
  CLI::App* traj = app.add_subcommand(
      "trajectory", "Run one quantum trajectory, emit events as JSON");
  traj_flags.attach(traj);
  traj->add_option("--out", traj_out, "Output JSON path ('-' = stdout)");

  SimFlags ens_flags;
  long n_traj = 0;
  int workers = default_workers();
  std::string prefix = "ensemble";
  CLI::App* ens = app.add_subcommand(
      "ensemble", "Average observables over many trajectories, emit CSV");
  ens_flags.attach(ens);
  ens->add_option("--traj", n_traj, "Number of trajectories")->required();
  ens->add_option("--workers", workers, "Worker threads")
      ->envname("BECSIM_WORKERS");
  ens->add_option("--out-prefix", prefix, "Prefix for CSV/manifest files");

  TheoryFlags theory_flags;
  CLI::App* theory = app.add_subcommand(
      "theory", "Evaluate a closed-form result or oracle");
  theory_flags.attach(theory);

  tools::FigureRequest fig_req;
  std::string fig_prefix;
  int fig_workers = default_workers();
  CLI::App* figure = app.add_subcommand(
      "figure", "Emit every data series behind one of the standard figures");
  figure->add_option("id", fig_req.id, "fig2 .. fig7")->required();
  figure->add_option("--traj", fig_req.n_traj,
                     "Override the per-figure trajectory count");
  figure->add_option("--workers", fig_workers, "Worker threads")
      ->envname("BECSIM_WORKERS");
  figure->add_option("--seed", fig_req.seed, "Master seed");
  figure->add_option("--gamma", fig_req.gamma, "Decay rate");
  figure->add_option("--out-prefix", fig_prefix, "Output prefix (default id)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (traj->parsed()) return run_trajectory_cmd(traj_flags, traj_out);
    if (ens->parsed()) {
      return run_ensemble_cmd(ens_flags, n_traj, workers, prefix);
    }
    if (theory->parsed()) return run_theory_cmd(theory_flags);
    if (figure->parsed()) {
      fig_req.workers = fig_workers;
      return run_figure_cmd(fig_req, fig_prefix);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
