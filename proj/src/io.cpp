#include "hardlattice/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace hardlattice {

using nlohmann::json;

std::string format_shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc()) throw std::runtime_error("format_shortest: conversion failed");
  return std::string(buf, res.ptr);
}

json to_json(const Configuration& cfg) {
  json pos = json::array();
  for (const Point2& p : cfg.positions()) {
    pos.push_back(p.x());
    pos.push_back(p.y());
  }
  return json{{"N", cfg.n()}, {"l", cfg.l()}, {"epsilon", cfg.epsilon()}, {"positions", std::move(pos)}};
}

namespace {

void require_keys(const json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": expected a JSON object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw std::invalid_argument(std::string(what) + ": unknown key '" + k + "'");
  }
  for (const char* key : keys) {
    if (!j.contains(key)) throw std::invalid_argument(std::string(what) + ": missing key '" + key + "'");
  }
}

}  // namespace

Configuration configuration_from_json(const json& j) {
  require_keys(j, {"N", "l", "epsilon", "positions"}, "configuration");
  const int n = j.at("N").get<int>();
  const auto& arr = j.at("positions");
  if (!arr.is_array()) throw std::invalid_argument("configuration: positions must be an array");
  if (n < 2 || arr.size() != 2 * static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw std::invalid_argument("configuration: positions must hold 2N^2 numbers");
  }
  std::vector<Point2> pos(arr.size() / 2);
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = Point2(arr[2 * i].get<double>(), arr[2 * i + 1].get<double>());
  return Configuration(n, j.at("l").get<double>(), j.at("epsilon").get<double>(), std::move(pos));
}

json checkpoint_to_json(const Chain& chain) {
  return json{{"format", "hardlattice-checkpoint/1"},
              {"configuration", to_json(chain.snapshot())},
              {"proposal_radius", chain.proposal_radius()},
              {"random_scan", chain.random_scan()},
              {"rng", {{"algorithm", Rng::kAlgorithm}, {"state", chain.rng().state()}}},
              {"accepted", chain.accepted()},
              {"proposed", chain.proposed()}};
}

Chain chain_from_checkpoint(const json& j) {
  require_keys(j, {"format", "configuration", "proposal_radius", "random_scan", "rng", "accepted", "proposed"},
               "checkpoint");
  if (j.at("format") != "hardlattice-checkpoint/1") throw std::invalid_argument("checkpoint: unsupported format");
  const auto& r = j.at("rng");
  require_keys(r, {"algorithm", "state"}, "checkpoint.rng");
  if (r.at("algorithm") != Rng::kAlgorithm) throw std::invalid_argument("checkpoint: unknown rng algorithm");
  Rng rng(0);
  rng.set_state(r.at("state").get<std::string>());
  return Chain::restore(configuration_from_json(j.at("configuration")), j.at("proposal_radius").get<double>(),
                        j.at("random_scan").get<bool>(), rng,
                        {j.at("accepted").get<std::uint64_t>(), j.at("proposed").get<std::uint64_t>()});
}

std::string scan_csv(const std::vector<ScanRecord>& records) {
  std::ostringstream os;
  for (std::size_t i = 0; i < kScanCsvColumns.size(); ++i) os << (i ? "," : "") << kScanCsvColumns[i];
  os << '\n';
  for (const ScanRecord& r : records) {
    os << r.n << ',' << format_shortest(r.l) << ',' << format_shortest(r.epsilon) << ',' << r.sweeps << ','
       << r.n_samples << ',' << format_shortest(r.acceptance_rate) << ',' << format_shortest(r.op_id.mean) << ','
       << format_shortest(r.op_id.standard_error) << ',' << format_shortest(r.op_lid.mean) << ','
       << format_shortest(r.op_lid.standard_error) << ',' << format_shortest(r.bond_dx.mean) << ','
       << format_shortest(r.bond_dx.standard_error) << ',' << format_shortest(r.bond_dy.mean) << ','
       << format_shortest(r.bond_dy.standard_error) << ',' << (r.identities_ok ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string scan_gnuplot(const std::vector<ScanRecord>& records) {
  std::map<int, std::vector<const ScanRecord*>> by_n;
  for (const auto& r : records) by_n[r.n].push_back(&r);
  std::ostringstream os;
  bool first = true;
  for (const auto& [n, rs] : by_n) {
    if (!first) os << "\n\n";
    first = false;
    os << "# N = " << n << "\n# l mean_op_id se_op_id mean_op_lid se_op_lid\n";
    for (const ScanRecord* r : rs) {
      os << format_shortest(r->l) << ' ' << format_shortest(r->op_id.mean) << ' '
         << format_shortest(r->op_id.standard_error) << ' ' << format_shortest(r->op_lid.mean) << ' '
         << format_shortest(r->op_lid.standard_error) << '\n';
    }
  }
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace hardlattice
