// Command-line front end: simulations, theta scans, bound tables, and
// analysis of shot-record files.
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 expectation-flag failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kcbs/ngon.hpp"
#include "kcbs/shotfile.hpp"
#include "kcbs/simulator.hpp"
#include "kcbs/stats.hpp"
#include "kcbs/theory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "kcbs-sim 1.0.0";
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitExpectation = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "compat", "<x>deg", "<x>rad", or a plain number in radians.
double parse_theta(const std::string& text, int n_obs) {
  if (text == "compat") return kcbs::compatibility_angle(n_obs);
  std::string num = text;
  double scale = 1.0;
  if (text.size() > 3 && text.ends_with("deg")) {
    num = text.substr(0, text.size() - 3);
    scale = std::numbers::pi / 180.0;
  } else if (text.size() > 3 && text.ends_with("rad")) {
    num = text.substr(0, text.size() - 3);
  }
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(num, &pos);
  } catch (const std::exception&) {
    throw UsageError("cannot parse angle '" + text + "'");
  }
  if (pos != num.size()) throw UsageError("cannot parse angle '" + text + "'");
  return value * scale;
}

kcbs::NoiseModel noise_from_json(const json& j) {
  kcbs::NoiseModel m;
  m.pulse_angle_sd = j.value("pulse_angle_sd", 0.0);
  m.pulse_phase_sd = j.value("pulse_phase_sd", 0.0);
  m.common_detuning_fwhm = j.value("common_detuning_fwhm", 0.0);
  m.seconds_per_pi_pulse = j.value("seconds_per_pi_pulse", 0.0);
  m.detection.bright_error = j.value("bright_error", 0.0);
  m.detection.dark_error = j.value("dark_error", 0.0);
  m.contrast_sigma_t = j.value("contrast_sigma_t", 0.0);
  m.redraw_block = j.value("redraw_block", 1L);
  m.validate();
  return m;
}

kcbs::NoiseModel parse_noise(const std::string& text) {
  if (text == "ideal") return kcbs::NoiseModel::ideal();
  if (text == "calibrated") return kcbs::NoiseModel::calibrated();
  std::ifstream in(text);
  if (!in) throw UsageError("cannot open noise file: " + text);
  json j;
  in >> j;
  return noise_from_json(j);
}

std::uint64_t fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char c;
  while (in.get(c)) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001B3ULL;
  return h;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path resolve_out(const std::string& out, const std::string& fallback_name) {
  if (!out.empty()) return out;
  const char* dir = std::getenv("KCBS_OUT_DIR");
  return fs::path(dir ? dir : ".") / fallback_name;
}

std::ostream& open_sink(std::ofstream& file, const std::string& out) {
  if (out.empty()) return std::cout;
  file.open(out);
  if (!file) throw std::runtime_error("cannot open output file: " + out);
  return file;
}

json measured_json(const kcbs::Measured& m) { return json{{"value", m.value}, {"se", m.se}}; }

json bounds_json(const kcbs::BoundSet& b) {
  return json{{"nc", b.nc}, {"qm", b.qm}, {"ns", b.ns}, {"bell", b.bell}};
}

json report_json(const kcbs::WitnessReport& r) {
  json j;
  j["n_obs"] = r.n_obs;
  j["order"] = kcbs::to_string(r.order);
  j["units"] = {{"theta", "rad"}, {"witness", "dimensionless"}};
  j["theta_est"] = measured_json(r.theta_est);
  j["s_n"] = measured_json(r.s);
  j["epsilon_terms"] = r.epsilon_terms;
  j["epsilon_sum"] = measured_json(r.epsilon_sum);
  j["s_n_ext"] = measured_json(r.s_ext);
  j["cf"] = measured_json(r.cf);
  j["bounds"] = bounds_json(r.bounds);
  j["saturation"] = measured_json(r.saturation);
  j["normalized_signaling"] = measured_json(r.normalized_signaling);
  j["epsilon_noise_dominated"] = r.epsilon_noise_dominated;
  const auto [vs_bare, vs_ext] = kcbs::violation_significance(r);
  j["significance_vs_nc"] = {{"bare", vs_bare}, {"extended", vs_ext}};
  return j;
}

void print_report_human(std::ostream& os, const kcbs::WitnessReport& r) {
  const auto [vs_bare, vs_ext] = kcbs::violation_significance(r);
  os << "N = " << r.n_obs << "  order = " << kcbs::to_string(r.order) << "\n";
  os << "theta_est = " << r.theta_est.value << " +- " << r.theta_est.se << " rad\n";
  os << "S_N       = " << r.s.value << " +- " << r.s.se << "\n";
  os << "sum eps   = " << r.epsilon_sum.value << " +- " << r.epsilon_sum.se
     << (r.epsilon_noise_dominated ? "  (shot-noise dominated)" : "") << "\n";
  os << "S_N_ext   = " << r.s_ext.value << " +- " << r.s_ext.se << "\n";
  os << "CF        = " << r.cf.value << " +- " << r.cf.se << "\n";
  os << "bounds    : nc " << r.bounds.nc << ", qm " << r.bounds.qm << ", ns " << r.bounds.ns
     << ", bell " << r.bounds.bell << "\n";
  os << "saturation = " << r.saturation.value << " +- " << r.saturation.se
     << ", signaling = " << r.normalized_signaling.value << " +- "
     << r.normalized_signaling.se << "\n";
  os << "violation  = " << vs_bare << " sigma (bare), " << vs_ext << " sigma (extended)\n";
}

struct CommonFlags {
  int n_obs = 5;
  std::string theta = "compat";
  long reps = 10000;
  std::uint64_t seed = 0;
  std::string order = "normal";
  std::string noise = "ideal";
  std::string mode = "block";
  int threads = 1;
  std::string out;
  std::string format = "table";
};

kcbs::RunPlan make_plan(const CommonFlags& f) {
  kcbs::RunPlan plan;
  plan.config.n_obs = f.n_obs;
  plan.config.theta = parse_theta(f.theta, f.n_obs);
  plan.config.mode = f.mode == "concatenated" ? kcbs::SequenceMode::Concatenated
                                              : kcbs::SequenceMode::Block;
  plan.order_normal = f.order == "normal" || f.order == "both";
  plan.order_reverse = f.order == "reverse" || f.order == "both";
  plan.n_per_pair = f.reps;
  plan.seed = f.seed;
  plan.noise = parse_noise(f.noise);
  plan.threads = f.threads;
  plan.validate();
  return plan;
}

kcbs::ShotData dataset_for(const kcbs::RunPlan& plan, const std::string& noise_name) {
  kcbs::ShotData data;
  data.header.n_obs = plan.config.n_obs;
  data.header.theta_set = plan.config.theta;
  data.header.mode = plan.config.mode;
  if (plan.order_normal) data.header.orders.push_back(kcbs::Order::Normal);
  if (plan.order_reverse) data.header.orders.push_back(kcbs::Order::Reverse);
  data.header.n_per_pair = plan.n_per_pair;
  data.header.seed = plan.seed;
  data.header.noise = noise_name;
  data.records = kcbs::run(plan);
  return data;
}

// One analysis report per order contained in the dataset.
std::vector<kcbs::WitnessReport> analyze_records(const std::vector<kcbs::ShotRecord>& records) {
  std::vector<kcbs::WitnessReport> reports;
  for (kcbs::Order order : {kcbs::Order::Normal, kcbs::Order::Reverse}) {
    std::vector<kcbs::ShotRecord> subset;
    for (const kcbs::ShotRecord& r : records)
      if (r.order == order) subset.push_back(r);
    if (subset.empty()) continue;
    const auto stats = kcbs::aggregate(subset);
    reports.push_back(kcbs::witness(stats, kcbs::bounds(subset.front().n_obs)));
  }
  if (reports.empty()) throw std::invalid_argument("no records to analyze");
  return reports;
}

int cmd_theory(const CommonFlags& f, double theta_min, double theta_max, int points,
               bool single_theta) {
  std::vector<double> grid;
  if (single_theta) {
    grid.push_back(parse_theta(f.theta, f.n_obs));
  } else {
    for (int k = 0; k < points; ++k)
      grid.push_back(theta_min + (theta_max - theta_min) * k / std::max(points - 1, 1));
  }
  const kcbs::BoundSet b = kcbs::bounds(f.n_obs);
  std::ofstream file;
  std::ostream& os = open_sink(file, f.out);
  json rows = json::array();
  if (f.format == "table")
    os << "theta\ts_n\teps_sum\ts_n_ext\te_s_n_ext\tnc\tqm\tns\tbell\n";
  for (double theta : grid) {
    const kcbs::NgonTheory t = kcbs::ngon_theory(f.n_obs, theta);
    const double a = std::cos(2.0 * theta);
    const double sigma = std::sqrt(2.0 * (1.0 - a * a) / static_cast<double>(f.reps));
    const double e_eps = kcbs::folded_normal_mean(t.epsilon, sigma);
    const double e_ext = t.s + f.n_obs * e_eps;
    if (f.format == "table") {
      os << theta << '\t' << t.s << '\t' << f.n_obs * t.epsilon << '\t' << t.s_ext << '\t'
         << e_ext << '\t' << b.nc << '\t' << b.qm << '\t' << b.ns << '\t' << b.bell << "\n";
    } else {
      rows.push_back({{"theta", theta},
                      {"s_n", t.s},
                      {"eps_sum", f.n_obs * t.epsilon},
                      {"s_n_ext", t.s_ext},
                      {"e_s_n_ext", e_ext},
                      {"bounds", bounds_json(b)}});
    }
  }
  if (f.format != "table")
    os << json{{"tool", kToolVersion}, {"n_obs", f.n_obs}, {"reps", f.reps}, {"rows", rows}}
              .dump(2)
       << "\n";
  return kExitOk;
}

int cmd_simulate(const CommonFlags& f) {
  const kcbs::RunPlan plan = make_plan(f);
  const kcbs::ShotData data = dataset_for(plan, f.noise);
  const fs::path path = resolve_out(f.out, "shots.dat");
  kcbs::write_shotfile(path, data);
  std::cout << "wrote " << data.records.size() << " records (" << plan.config.n_obs
            << " pairs x " << data.header.orders.size() << " orders x " << plan.n_per_pair
            << " reps), seed " << plan.seed << ", to " << path.string() << "\n";
  return kExitOk;
}

int cmd_analyze(const std::string& input, const std::string& adapter_name,
                const CommonFlags& f, bool expect_contextual) {
  const kcbs::ShotImportAdapter* adapter = kcbs::find_import_adapter(adapter_name);
  if (adapter == nullptr) throw UsageError("unknown import adapter: " + adapter_name);
  std::ifstream in(input, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + input);
  const kcbs::ShotData data = adapter->import(in);
  const auto reports = analyze_records(data.records);

  std::ofstream file;
  std::ostream& os = open_sink(file, f.out);
  if (f.format == "doc") {
    json docs = json::array();
    for (const auto& r : reports) docs.push_back(report_json(r));
    json doc{{"tool", kToolVersion},
             {"timestamp", timestamp_utc()},
             {"input", input},
             {"input_fnv1a64", fnv1a_file(input)},
             {"theta_set", data.header.theta_set},
             {"reports", docs}};
    os << doc.dump(2) << "\n";
  } else {
    for (const auto& r : reports) print_report_human(os, r);
  }
  if (expect_contextual) {
    for (const auto& r : reports)
      if (r.s_ext.value >= r.bounds.nc) return kExitExpectation;
  }
  return kExitOk;
}

int cmd_bounds(const std::vector<int>& n_list, const CommonFlags& f) {
  std::ofstream file;
  std::ostream& os = open_sink(file, f.out);
  json rows = json::array();
  if (f.format == "table") os << "n\tnc\tqm\tns\tbell\tideal_cf\n";
  for (int n : n_list) {
    const kcbs::BoundSet b = kcbs::bounds(n);
    const double ideal_cf = (b.qm - b.nc) / (b.ns - b.nc);
    if (f.format == "table") {
      os << n << '\t' << b.nc << '\t' << b.qm << '\t' << b.ns << '\t' << b.bell << '\t'
         << ideal_cf << "\n";
    } else {
      rows.push_back({{"n_obs", n}, {"bounds", bounds_json(b)}, {"ideal_cf", ideal_cf}});
    }
  }
  if (f.format != "table") os << json{{"tool", kToolVersion}, {"rows", rows}}.dump(2) << "\n";
  return kExitOk;
}

int cmd_ngon_sweep(const std::vector<int>& n_list, const CommonFlags& f) {
  std::ofstream file;
  std::ostream& os = open_sink(file, f.out);
  json docs = json::array();
  if (f.format == "table")
    os << "n\ttheta\ts_n\tse_s_n\teps_sum\tse_eps\ts_n_ext\tse_ext\tcf\tse_cf\tfrac_gap\n";
  for (int n : n_list) {
    CommonFlags fn = f;
    fn.n_obs = n;
    const kcbs::RunPlan plan = make_plan(fn);
    const kcbs::ShotData data = dataset_for(plan, f.noise);
    for (const auto& r : analyze_records(data.records)) {
      const double frac_gap = (r.s.value - r.bounds.nc) / std::abs(r.bounds.nc);
      if (f.format == "table") {
        os << n << '\t' << plan.config.theta << '\t' << r.s.value << '\t' << r.s.se << '\t'
           << r.epsilon_sum.value << '\t' << r.epsilon_sum.se << '\t' << r.s_ext.value << '\t'
           << r.s_ext.se << '\t' << r.cf.value << '\t' << r.cf.se << '\t' << frac_gap << "\n";
      } else {
        json j = report_json(r);
        j["theta_set"] = plan.config.theta;
        j["frac_gap"] = frac_gap;
        docs.push_back(j);
      }
    }
  }
  if (f.format != "table") {
    os << json{{"tool", kToolVersion}, {"timestamp", timestamp_utc()}, {"reports", docs}}.dump(2)
       << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qutrit N-cycle contextuality simulator and analyzer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CommonFlags f;
  double theta_min = 0.0;
  double theta_max = std::numbers::pi / 2.0;
  int points = 101;
  std::string input;
  std::string adapter = "native";
  bool expect_contextual = false;
  std::vector<int> n_list;

  auto add_common = [&f](CLI::App* cmd, bool with_plan) {
    cmd->add_option("--n-obs", f.n_obs, "number of observables (odd, >= 5)");
    cmd->add_option("--out", f.out, "output path (default: stdout or $KCBS_OUT_DIR)");
    cmd->add_option("--format", f.format, "table | doc")
        ->check(CLI::IsMember({"table", "doc"}));
    if (with_plan) {
      cmd->add_option("--theta", f.theta, "angle: compat, <x>deg, <x>rad, or radians");
      cmd->add_option("--reps", f.reps, "repetitions per pair");
      cmd->add_option("--seed", f.seed, "RNG seed");
      cmd->add_option("--order", f.order, "normal | reverse | both")
          ->check(CLI::IsMember({"normal", "reverse", "both"}));
      cmd->add_option("--noise", f.noise, "ideal | calibrated | <json file>");
      cmd->add_option("--mode", f.mode, "block | concatenated")
          ->check(CLI::IsMember({"block", "concatenated"}));
      cmd->add_option("--threads", f.threads, "worker threads");
    }
  };

  CLI::App* theory = app.add_subcommand("theory", "analytic witness table over a theta grid");
  add_common(theory, true);
  theory->add_option("--theta-min", theta_min, "grid start (rad)");
  theory->add_option("--theta-max", theta_max, "grid end (rad)");
  theory->add_option("--points", points, "grid size");

  CLI::App* simulate = app.add_subcommand("simulate", "generate a shot-record file");
  add_common(simulate, true);

  CLI::App* analyze = app.add_subcommand("analyze", "witness report from a shot-record file");
  analyze->add_option("input", input, "shot-record file")->required();
  analyze->add_option("--adapter", adapter, "import adapter (default: native)");
  analyze->add_flag("--expect-contextual", expect_contextual,
                    "exit 3 unless S_N_ext < classical bound");
  add_common(analyze, false);

  CLI::App* bounds_cmd = app.add_subcommand("bounds", "bound table for a list of N");
  bounds_cmd->add_option("--n-obs", n_list, "list of odd N")->required();
  bounds_cmd->add_option("--out", f.out, "output path");
  bounds_cmd->add_option("--format", f.format, "table | doc")
      ->check(CLI::IsMember({"table", "doc"}));

  CLI::App* sweep = app.add_subcommand("ngon-sweep", "simulate and analyze a list of N");
  sweep->add_option("--n-obs-list", n_list, "list of odd N")->required();
  add_common(sweep, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (theory->parsed())
      return cmd_theory(f, theta_min, theta_max, points, theory->count("--theta") > 0);
    if (simulate->parsed()) return cmd_simulate(f);
    if (analyze->parsed()) return cmd_analyze(input, adapter, f, expect_contextual);
    if (bounds_cmd->parsed()) return cmd_bounds(n_list, f);
    if (sweep->parsed()) return cmd_ngon_sweep(n_list, f);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const kcbs::ShotFileError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const kcbs::IncompleteDatasetError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
