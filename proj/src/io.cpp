#include "becsim/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace becsim::io {

namespace {

using nlohmann::json;

std::string axis_name(RecordAxis axis) {
  return axis == RecordAxis::detection_count ? "detection_count" : "time";
}

RecordAxis axis_from_name(const std::string& name) {
  if (name == "detection_count") return RecordAxis::detection_count;
  if (name == "time") return RecordAxis::time;
  throw std::invalid_argument("config: unknown axis '" + name + "'");
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::vector<double> split_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_curve_csv(std::ostream& os, const EnsembleCurve& curve) {
  os << "x,mean,stderr,n\n";
  for (const EnsemblePoint& p : curve.points) {
    os << format_double(p.x) << ',' << format_double(p.mean) << ','
       << format_double(p.stderr_) << ',' << p.n << '\n';
  }
}

void write_bundle_csv(std::ostream& os, const std::vector<SeriesRow>& rows) {
  os << "series,x,mean,stderr,n\n";
  for (const SeriesRow& r : rows) {
    os << r.series << ',' << format_double(r.x) << ',' << format_double(r.mean)
       << ',' << format_double(r.stderr_) << ',' << r.n << '\n';
  }
}

json config_to_json(const SimConfig& cfg) {
  json j;
  j["n1"] = cfg.n1;
  j["n2"] = cfg.n2;
  j["gamma"] = cfg.gamma;
  j["kappa"] = cfg.kappa;
  j["eta"] = cfg.eta;
  j["seed"] = cfg.seed;
  j["axis"] = axis_name(cfg.axis);
  j["stop"] = cfg.stop;
  j["record_at"] = cfg.record_at;
  json obs = json::array();
  if (cfg.record_beta) obs.push_back("beta");
  if (cfg.record_max_overlap) obs.push_back("max_overlap");
  if (cfg.record_atoms) obs.push_back("atoms");
  if (cfg.record_snapshot) obs.push_back("state");
  j["observables"] = obs;
  return j;
}

json events_to_json(const std::vector<DetectionEvent>& events) {
  json arr = json::array();
  for (const DetectionEvent& e : events) {
    json je;
    je["kind"] = to_string(e.kind);
    if (e.time) je["time"] = *e.time;
    if (e.phi) je["phi"] = *e.phi;
    arr.push_back(std::move(je));
  }
  return arr;
}

json recorded_to_json(const SimConfig& cfg,
                      const RecordedObservables& recorded) {
  auto series = [&](const std::vector<double>& values) {
    json arr = json::array();
    for (std::size_t i = 0; i < recorded.x.size(); ++i) {
      json p;
      p["x"] = recorded.x[i];
      if (std::isfinite(values[i])) {
        p["value"] = values[i];
      } else {
        p["value"] = nullptr;
      }
      arr.push_back(std::move(p));
    }
    return arr;
  };
  json j = json::object();
  if (cfg.record_beta) j["beta"] = series(recorded.beta);
  if (cfg.record_max_overlap) j["max_overlap"] = series(recorded.max_overlap);
  if (cfg.record_atoms) j["atoms"] = series(recorded.atoms);
  return j;
}

std::string config_to_text(const SimConfig& cfg) {
  std::ostringstream os;
  os << "n1=" << cfg.n1 << '\n';
  os << "n2=" << cfg.n2 << '\n';
  os << "gamma=" << format_double(cfg.gamma) << '\n';
  os << "kappa=" << format_double(cfg.kappa) << '\n';
  os << "eta=" << format_double(cfg.eta) << '\n';
  os << "seed=" << cfg.seed << '\n';
  os << "axis=" << axis_name(cfg.axis) << '\n';
  os << "stop=" << format_double(cfg.stop) << '\n';
  os << "record_at=" << join_doubles(cfg.record_at) << '\n';
  std::string obs;
  if (cfg.record_beta) obs += "beta,";
  if (cfg.record_max_overlap) obs += "max_overlap,";
  if (cfg.record_atoms) obs += "atoms,";
  if (cfg.record_snapshot) obs += "state,";
  if (!obs.empty()) obs.pop_back();
  os << "observables=" << obs << '\n';
  return os.str();
}

SimConfig parse_config_text(const std::string& text) {
  SimConfig cfg;
  cfg.record_beta = false;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "n1") {
        cfg.n1 = std::stoi(value);
      } else if (key == "n2") {
        cfg.n2 = std::stoi(value);
      } else if (key == "gamma") {
        cfg.gamma = std::stod(value);
      } else if (key == "kappa") {
        cfg.kappa = std::stod(value);
      } else if (key == "eta") {
        cfg.eta = std::stod(value);
      } else if (key == "seed") {
        cfg.seed = std::stoull(value);
      } else if (key == "axis") {
        cfg.axis = axis_from_name(value);
      } else if (key == "stop") {
        cfg.stop = std::stod(value);
      } else if (key == "record_at") {
        cfg.record_at = split_doubles(value);
      } else if (key == "observables") {
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
          if (item == "beta") cfg.record_beta = true;
          else if (item == "max_overlap") cfg.record_max_overlap = true;
          else if (item == "atoms") cfg.record_atoms = true;
          else if (item == "state") cfg.record_snapshot = true;
          else if (!item.empty())
            throw std::invalid_argument("unknown observable '" + item + "'");
        }
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " (" + key + "): " + e.what());
    }
  }
  return cfg;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
  return buf;
}

json make_manifest(const SimConfig& cfg, const std::string& version,
                   double duration_sec,
                   const std::map<std::string, std::string>& sums) {
  json j;
  j["config"] = config_to_json(cfg);
  j["config_file"] = config_to_text(cfg);  // feed back via --config to rerun
  j["version"] = version;
  j["master_seed"] = cfg.seed;
  j["duration_seconds"] = duration_sec;
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  j["unix_time"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now).count() /
      1000.0;
  json outs = json::object();
  for (const auto& [name, sum] : sums) outs[name] = sum;
  j["outputs"] = outs;
  return j;
}

}  // namespace becsim::io
