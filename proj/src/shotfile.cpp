#include "kcbs/shotfile.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace kcbs {

namespace {

constexpr const char* kMagic = "# kcbs-shotfile";

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Order parse_order(const std::string& s, long line) {
  if (s == "normal") return Order::Normal;
  if (s == "reverse") return Order::Reverse;
  throw ShotFileError("unknown order '" + s + "'", line);
}

}  // namespace

void write_shotfile(std::ostream& out, const ShotData& data) {
  const ShotFileHeader& h = data.header;
  out << kMagic << "\n";
  out << "version=" << h.version << "\n";
  out << "n_obs=" << h.n_obs << "\n";
  out << "theta_set=" << format_double(h.theta_set) << "\n";
  out << "mode=" << (h.mode == SequenceMode::Block ? "block" : "concatenated") << "\n";
  out << "orders=";
  for (std::size_t k = 0; k < h.orders.size(); ++k)
    out << (k ? "," : "") << to_string(h.orders[k]);
  out << "\n";
  out << "n_per_pair=" << h.n_per_pair << "\n";
  out << "seed=" << h.seed << "\n";
  out << "noise=" << h.noise << "\n";
  out << "columns=i j order rep a1 a2\n";
  for (const ShotRecord& r : data.records) {
    out << r.i << ' ' << r.j << ' ' << (r.order == Order::Normal ? 'N' : 'R') << ' ' << r.rep
        << ' ' << r.a1 << ' ' << r.a2 << "\n";
  }
}

void write_shotfile(const std::filesystem::path& path, const ShotData& data) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-identical across platforms
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  write_shotfile(out, data);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ShotData read_shotfile(std::istream& in) {
  ShotData data;
  ShotFileHeader& h = data.header;
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line) || line != kMagic)
    throw ShotFileError("missing shotfile magic line", 1);
  lineno = 1;

  std::map<std::string, std::string> fields;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ShotFileError("malformed header line", lineno);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "columns") {
      if (value != "i j order rep a1 a2")
        throw ShotFileError("unsupported column layout '" + value + "'", lineno);
      saw_columns = true;
      break;
    }
    fields[key] = value;
  }
  if (!saw_columns) throw ShotFileError("missing columns line", lineno);
  if (!fields.contains("version")) throw ShotFileError("missing mandatory version field", lineno);

  try {
    h.version = std::stoi(fields.at("version"));
    h.n_obs = std::stoi(fields.at("n_obs"));
    h.theta_set = std::stod(fields.at("theta_set"));
    h.n_per_pair = std::stol(fields.at("n_per_pair"));
    h.seed = std::stoull(fields.at("seed"));
    h.noise = fields.at("noise");
    const std::string mode = fields.at("mode");
    if (mode != "block" && mode != "concatenated")
      throw ShotFileError("unknown mode '" + mode + "'", lineno);
    h.mode = mode == "block" ? SequenceMode::Block : SequenceMode::Concatenated;
    std::stringstream orders(fields.at("orders"));
    std::string tok;
    while (std::getline(orders, tok, ',')) h.orders.push_back(parse_order(tok, lineno));
  } catch (const ShotFileError&) {
    throw;
  } catch (const std::out_of_range&) {
    throw ShotFileError("missing mandatory header field", lineno);
  } catch (const std::exception& e) {
    throw ShotFileError(std::string("bad header value: ") + e.what(), lineno);
  }
  if (h.version != kShotFileVersion)
    throw ShotFileError("unsupported version " + std::to_string(h.version), lineno);

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    ShotRecord r{};
    char order_ch = 0;
    if (!(row >> r.i >> r.j >> order_ch >> r.rep >> r.a1 >> r.a2))
      throw ShotFileError("malformed record", lineno);
    std::string extra;
    if (row >> extra) throw ShotFileError("trailing fields in record", lineno);
    if (order_ch != 'N' && order_ch != 'R') throw ShotFileError("bad order tag", lineno);
    if (std::abs(r.a1) != 1 || std::abs(r.a2) != 1)
      throw ShotFileError("outcomes must be ±1", lineno);
    if (r.i < 1 || r.i > h.n_obs || r.j < 1 || r.j > h.n_obs)
      throw ShotFileError("pair index out of range", lineno);
    r.order = order_ch == 'N' ? Order::Normal : Order::Reverse;
    r.n_obs = h.n_obs;
    r.theta_set = h.theta_set;
    data.records.push_back(r);
  }
  return data;
}

ShotData read_shotfile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  return read_shotfile(in);
}

namespace {

class NativeAdapter final : public ShotImportAdapter {
 public:
  std::string name() const override { return "native"; }
  ShotData import(std::istream& in) const override { return read_shotfile(in); }
};

const NativeAdapter kNativeAdapter;

}  // namespace

const ShotImportAdapter* find_import_adapter(const std::string& name) {
  if (name == "native") return &kNativeAdapter;
  return nullptr;
}

}  // namespace kcbs
