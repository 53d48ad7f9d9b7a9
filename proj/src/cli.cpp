#include "hardlattice/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hardlattice/analysis.hpp"
#include "hardlattice/geometry.hpp"
#include "hardlattice/io.hpp"
#include "hardlattice/observables.hpp"

namespace hardlattice::cli {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "hardlattice 1.0.0";

// Auxiliary RNG streams sit above any grid index.
constexpr std::uint64_t kLemmaStream = 1ull << 40;
constexpr std::uint64_t kTripleStream = (1ull << 40) + 1;
constexpr std::uint64_t kMatrixStream = (1ull << 40) + 2;
constexpr std::uint64_t kVerifyChainStream = 1ull << 41;

// Defaults double as the schema: every accepted key appears here, and a
// value's type fixes the accepted JSON type. A null default means "optional number".
json config_defaults() {
  return json{
      {"seed", 0u},
      {"threads", 1u},
      {"output", {{"dir", "out"}}},
      {"scan",
       {{"N", {2, 4, 8}},
        {"l", {1.01, 1.02, 1.05, 1.09}},
        {"epsilon", 0.1},
        {"proposal_radius", nullptr},
        {"sweeps", 10000},
        {"burn_in", 1000},
        {"thin", 1},
        {"random_scan", false},
        {"batches", 20},
        {"omega2_oracle_every", 0},
        {"proof_chain", false},
        {"lemma_draws", 1000000}}},
      {"verify",
       {{"N", {2, 4}},
        {"l", 1.05},
        {"epsilon", 0.1},
        {"proposal_radius", nullptr},
        {"sweeps", 200},
        {"burn_in", 50},
        {"thin", 1},
        {"omega2_oracle_every", 10},
        {"grid", 64},
        {"squared_bound_samples", 1000000},
        {"lemma_draws", 1000000},
        {"dist_matrices", 10000},
        {"dist_grid", 3600},
        {"heron_triangles", 10000}}},
      {"oracle",
       {{"epsilon_ladder", {0.05, 0.1, 0.2}},
        {"grid", 64},
        {"lemma_draws", 1000000},
        {"lemma_cap", 0.1},
        {"dist_matrices", 10000},
        {"dist_grid", 3600}}},
  };
}

bool type_matches(const json& def, const json& v) {
  if (def.is_null()) return v.is_number() || v.is_null();
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_number_integer()) return v.is_number_integer();
  if (def.is_number()) return v.is_number();
  if (def.is_string()) return v.is_string();
  if (def.is_array()) {
    if (!v.is_array()) return false;
    const json& elem = def.empty() ? json(0.0) : def.front();
    return std::all_of(v.begin(), v.end(), [&](const json& e) { return type_matches(elem, e); });
  }
  return false;
}

json merge(const json& defaults, const json& in, const std::string& path) {
  if (!in.is_object()) throw std::invalid_argument(path + ": expected an object");
  json out = defaults;
  for (const auto& [k, v] : in.items()) {
    const std::string where = path.empty() ? k : path + "." + k;
    if (!defaults.contains(k)) throw std::invalid_argument("unknown config key '" + where + "'");
    const json& def = defaults.at(k);
    if (def.is_object()) {
      out[k] = merge(def, v, where);
    } else if (!type_matches(def, v)) {
      throw std::invalid_argument("config key '" + where + "' has the wrong type");
    } else {
      out[k] = v;
    }
  }
  return out;
}

SamplerParams sampler_from(const json& block, std::uint64_t seed) {
  SamplerParams p;
  p.proposal_radius = block.at("proposal_radius").get<double>();
  p.sweeps = block.at("sweeps").get<std::int64_t>();
  p.burn_in = block.at("burn_in").get<std::int64_t>();
  p.thin = block.at("thin").get<std::int64_t>();
  p.seed = seed;
  if (block.contains("random_scan")) p.random_scan = block.at("random_scan").get<bool>();
  return p;
}

void fill_radius(json& block) {
  if (block.at("proposal_radius").is_null()) block["proposal_radius"] = block.at("epsilon").get<double>() / 10.0;
}

json resolved_config(const GlobalOptions& g) {
  json cfg = load_config(g.config);
  if (g.seed) cfg["seed"] = *g.seed;
  cfg["threads"] = resolve_threads(g, cfg);
  if (g.out) cfg["output"]["dir"] = g.out->string();
  fill_radius(cfg["scan"]);
  fill_radius(cfg["verify"]);
  return cfg;
}

json certificate_json(const EpsilonCertificate& c) {
  return json{{"epsilon", c.epsilon},
              {"grid_points_per_axis", c.grid_points_per_axis},
              {"margin", c.margin},
              {"min_slack", c.min_slack},
              {"lipschitz_slack", c.lipschitz_slack},
              {"cells", c.cells},
              {"uncertified_cells", c.uncertified_cells},
              {"certified", c.certified}};
}

json metadata(const std::string& command, const json& cfg) {
  return json{{"command", command},
              {"version", kVersion},
              {"seed", cfg.at("seed")},
              {"rng_algorithm", Rng::kAlgorithm},
              {"resolved_config", cfg}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::filesystem::path out_dir(const json& cfg) { return cfg.at("output").at("dir").get<std::string>(); }

struct DistAgreement {
  double max_abs_diff = 0.0;
  std::int64_t matrices = 0;
};

DistAgreement dist_agreement(std::int64_t matrices, int grid, std::uint64_t seed) {
  Rng rng(seed, kMatrixStream);
  DistAgreement d;
  while (d.matrices < matrices) {
    Mat2 m;
    m << rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2);
    if (!(m.determinant() > 0.0)) continue;
    ++d.matrices;
    d.max_abs_diff = std::max(d.max_abs_diff, std::abs(dist_so2(m) - dist_so2_bruteforce(m, grid)));
  }
  return d;
}

struct HeronAgreement {
  double max_rel_diff = 0.0;
  std::int64_t triangles = 0;
};

// Random triangles with sides in (1, 1 + eps), placed by their side lengths.
HeronAgreement heron_agreement(std::int64_t count, double epsilon, std::uint64_t seed) {
  Rng rng(seed, kMatrixStream + 1);
  HeronAgreement h;
  while (h.triangles < count) {
    const double a = rng.uniform(1.0, 1.0 + epsilon);
    const double b = rng.uniform(1.0, 1.0 + epsilon);
    const double c = rng.uniform(1.0, 1.0 + epsilon);
    // Place side a on the x-axis; the apex is at distance c from the origin, b from (a, 0).
    const double x = (a * a + c * c - b * b) / (2.0 * a);
    const double y2 = c * c - x * x;
    if (!(y2 > 0.0)) continue;
    const Point2 p0(0, 0), p1(a, 0), p2(x, std::sqrt(y2));
    const double a1 = (p1 - p0).norm(), a2 = (p2 - p1).norm(), a3 = (p0 - p2).norm();
    ++h.triangles;
    const double cross = std::abs(signed_area(p0, p1, p2));
    h.max_rel_diff = std::max(h.max_rel_diff, std::abs(heron_area(a1, a2, a3) - cross) / cross);
  }
  return h;
}

}  // namespace

unsigned resolve_threads(const GlobalOptions& g, const json& config) {
  if (g.threads) return std::max(1u, *g.threads);
  if (const char* env = std::getenv("HARDLATTICE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  if (config.contains("threads")) return std::max(1u, config.at("threads").get<unsigned>());
  return 1;
}

json load_config(const std::filesystem::path& path) {
  json in;
  try {
    in = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw std::invalid_argument("config is not valid JSON: " + std::string(e.what()));
  }
  return merge(config_defaults(), in, "");
}

int cmd_scan(const GlobalOptions& g, const ScanFlags& flags, std::ostream& out, std::ostream& err) {
  json cfg;
  ScanOptions opts;
  std::uint64_t seed = 0;
  try {
    cfg = resolved_config(g);
    seed = cfg.at("seed").get<std::uint64_t>();
    const json& s = cfg.at("scan");
    opts.n_list = s.at("N").get<std::vector<int>>();
    opts.l_list = s.at("l").get<std::vector<double>>();
    opts.epsilon = s.at("epsilon").get<double>();
    opts.sampler = sampler_from(s, seed);
    opts.threads = cfg.at("threads").get<unsigned>();
    opts.oracle_every = s.at("omega2_oracle_every").get<std::int64_t>();
    opts.batches = s.at("batches").get<std::size_t>();
    validate_scan(opts);
  } catch (const std::exception& e) {
    err << "error: invalid config: " << e.what() << "\n";
    return kInvalidConfig;
  }

  const EpsilonCertificate cert = epsilon_margin(opts.epsilon);
  if (flags.certify_epsilon) {
    out << "epsilon " << opts.epsilon << ": margin " << cert.margin << ", lipschitz slack " << cert.lipschitz_slack
        << ", uncertified cells " << cert.uncertified_cells << "/" << cert.cells << " -> "
        << (cert.certified ? "certified" : "NOT certified") << "\n";
  }
  if (!cert.certified) {
    err << "error: invalid config: epsilon " << opts.epsilon << " fails the first-order area bound certificate\n";
    return kInvalidConfig;
  }
  for (double l : opts.l_list) {
    if (!(l < 1.0 + opts.epsilon)) {
      err << "error: standard configuration at l = " << l << " is not admissible for epsilon = " << opts.epsilon
          << "\n";
      return kInadmissibleStart;
    }
  }

  json meta = metadata("scan", cfg);
  meta["epsilon_certificate"] = certificate_json(cert);
  if (cfg.at("scan").at("proof_chain").get<bool>()) {
    const auto est = estimate_lemma_constant(cfg.at("scan").at("lemma_draws").get<std::int64_t>(), opts.epsilon,
                                             seed, kLemmaStream);
    opts.c_hat = est.c_hat;
    meta["lemma_constant"] = {{"c_hat", est.c_hat}, {"cap", est.cap}, {"draws", est.draws}, {"accepted", est.accepted}};
  }

  std::vector<ScanRecord> records;
  try {
    records = scan(opts);
  } catch (const std::exception& e) {
    err << "error: scan failed: " << e.what() << "\n";
    return kCheckFailed;
  }
  bool all_ok = true;
  for (const auto& r : records) {
    if (!r.identities_ok) {
      all_ok = false;
      err << "grid point N=" << r.n << " l=" << r.l << " aborted: " << r.diagnostic << "\n";
    }
  }
  if (!all_ok) return kCheckFailed;

  const auto dir = out_dir(cfg);
  try {
    write_file_atomic(dir / "scan.csv", scan_csv(records));
    json acc = json::array();
    for (const auto& r : records) acc.push_back({{"N", r.n}, {"l", r.l}, {"acceptance_rate", r.acceptance_rate}});
    meta["grid"] = acc;
    write_file_atomic(dir / "scan.meta.json", dump(meta));
    if (flags.emit_gnuplot) write_file_atomic(dir / "scan.gnuplot.dat", scan_gnuplot(records));
  } catch (const std::exception& e) {
    err << "error: writing output failed: " << e.what() << "\n";
    return kInvalidConfig;
  }
  out << "wrote " << (dir / "scan.csv").string() << " (" << records.size() << " rows)\n";
  return kOk;
}

int cmd_verify(const GlobalOptions& g, const VerifyFlags& flags, std::ostream& out, std::ostream& err) {
  json cfg;
  std::vector<int> n_list;
  double l = 0.0;
  double epsilon = 0.0;
  SamplerParams sp;
  std::int64_t oracle_every = 0;
  std::uint64_t seed = 0;
  try {
    cfg = resolved_config(g);
    if (flags.omega2_oracle_every) cfg["verify"]["omega2_oracle_every"] = *flags.omega2_oracle_every;
    const json& v = cfg.at("verify");
    seed = cfg.at("seed").get<std::uint64_t>();
    n_list = v.at("N").get<std::vector<int>>();
    l = v.at("l").get<double>();
    epsilon = v.at("epsilon").get<double>();
    sp = sampler_from(v, seed);
    oracle_every = v.at("omega2_oracle_every").get<std::int64_t>();
    sp.validate();
    for (int n : n_list) validate_parameters(n, l, epsilon);
    if (oracle_every < 0) throw std::invalid_argument("omega2_oracle_every must be nonnegative");
    if (v.at("grid").get<int>() < kMinMarginGrid) throw std::invalid_argument("verify.grid must be at least 64");
  } catch (const std::exception& e) {
    err << "error: invalid config: " << e.what() << "\n";
    return kInvalidConfig;
  }
  if (!(l < 1.0 + epsilon)) {
    err << "error: standard configuration at l = " << l << " is not admissible for epsilon = " << epsilon << "\n";
    return kInadmissibleStart;
  }
  const json& v = cfg.at("verify");
  json results = json::array();
  bool all_ok = true;
  auto report = [&](const std::string& name, bool ok, const std::string& detail, json extra = json::object()) {
    all_ok = all_ok && ok;
    out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    extra["check"] = name;
    extra["ok"] = ok;
    results.push_back(std::move(extra));
  };
  std::ostringstream os;

  const EpsilonCertificate cert = epsilon_margin(epsilon, v.at("grid").get<int>());
  os << "margin " << cert.margin << ", lipschitz slack " << cert.lipschitz_slack << ", uncertified cells "
     << cert.uncertified_cells;
  report("area_first_order_bound", cert.certified, os.str(), certificate_json(cert));

  os.str("");
  if (cert.certified) {
    const auto sq = verify_squared_bound(epsilon, v.at("squared_bound_samples").get<std::int64_t>(), seed, kTripleStream);
    os << sq.violations << " violations in " << sq.samples << " triples, max lhs/rhs " << sq.max_ratio;
    report("squared_side_bound", sq.ok(), os.str(),
           {{"samples", sq.samples}, {"violations", sq.violations}, {"max_ratio", sq.max_ratio}});
  } else {
    report("squared_side_bound", false, "skipped: epsilon not certified");
  }

  os.str("");
  const auto dist = dist_agreement(v.at("dist_matrices").get<std::int64_t>(), v.at("dist_grid").get<int>(), seed);
  os << "max |closed form - brute force| " << dist.max_abs_diff << " over " << dist.matrices << " matrices";
  report("dist_so2_oracle", dist.max_abs_diff <= 2e-3, os.str(), {{"max_abs_diff", dist.max_abs_diff}});

  os.str("");
  const auto heron = heron_agreement(v.at("heron_triangles").get<std::int64_t>(), epsilon, seed);
  os << "max relative difference " << heron.max_rel_diff << " over " << heron.triangles << " triangles";
  report("heron_vs_cross_product", heron.max_rel_diff <= 1e-12, os.str(), {{"max_rel_diff", heron.max_rel_diff}});

  const auto lemma = estimate_lemma_constant(v.at("lemma_draws").get<std::int64_t>(), epsilon, seed, kLemmaStream);
  out << "INFO lemma constant estimate C_hat = " << lemma.c_hat << " (cap " << lemma.cap << ", " << lemma.accepted
      << " accepted draws)\n";

  for (std::size_t k = 0; k < n_list.size(); ++k) {
    const int n = n_list[k];
    std::int64_t samples = 0;
    std::int64_t oracle_runs = 0;
    std::int64_t oracle_disagreements = 0;
    std::int64_t admissibility_failures = 0;
    std::int64_t identity_failures = 0;
    std::int64_t chain_failures = 0;
    double worst_mean = 0.0, worst_area = 0.0, worst_pyth = 0.0;
    const auto summary = run_chain(
        sp, n, l, epsilon,
        [&](const Configuration& c, std::int64_t) {
          ++samples;
          const AdmissibilityReport adm = is_admissible(c);
          if (!adm.admissible()) ++admissibility_failures;
          if (oracle_every > 0 && samples % oracle_every == 0) {
            ++oracle_runs;
            if (check_omega2_oracle(c).ok != check_omega2_fast(c).ok) ++oracle_disagreements;
          }
          const IdentityReport id = check_identities(c);
          if (!id.ok()) ++identity_failures;
          worst_mean = std::max(worst_mean, id.mean_gradient_error);
          worst_area = std::max(worst_area, id.area_relative_error);
          worst_pyth = std::max(worst_pyth, id.pythagoras_relative_error);
          if (!proof_chain_check(c, lemma.c_hat).ok()) ++chain_failures;
        },
        kVerifyChainStream + k);
    const std::string tag = "N=" + std::to_string(n);
    os.str("");
    os << admissibility_failures << " inadmissible of " << samples << " samples, acceptance "
       << summary.acceptance_rate;
    report("chain_admissible " + tag, admissibility_failures == 0 && samples > 0, os.str());
    os.str("");
    os << "max |mean grad - l Id| " << worst_mean << ", max area rel err " << worst_area
       << ", max pythagoras rel err " << worst_pyth;
    report("identities " + tag, identity_failures == 0, os.str(),
           {{"mean_gradient_error", worst_mean}, {"area_relative_error", worst_area}, {"pythagoras_relative_error", worst_pyth}});
    os.str("");
    os << oracle_disagreements << " disagreements in " << oracle_runs << " exact checks";
    report("omega2_fast_vs_exact " + tag, oracle_disagreements == 0, os.str());
    os.str("");
    os << chain_failures << " failing samples of " << samples;
    report("proof_chain " + tag, chain_failures == 0, os.str());
  }

  json doc = metadata("verify", cfg);
  doc["lemma_constant"] = {{"c_hat", lemma.c_hat}, {"cap", lemma.cap}, {"draws", lemma.draws}};
  doc["checks"] = results;
  doc["all_ok"] = all_ok;
  try {
    write_file_atomic(out_dir(cfg) / "verify.json", dump(doc));
  } catch (const std::exception& e) {
    err << "error: writing output failed: " << e.what() << "\n";
    return kInvalidConfig;
  }
  out << (all_ok ? "all checks passed" : "some checks FAILED") << "\n";
  return all_ok ? kOk : kCheckFailed;
}

int cmd_oracle(const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  json cfg;
  std::vector<double> ladder;
  int grid = 0;
  double cap = 0.0;
  try {
    cfg = resolved_config(g);
    const json& o = cfg.at("oracle");
    ladder = o.at("epsilon_ladder").get<std::vector<double>>();
    grid = o.at("grid").get<int>();
    cap = o.at("lemma_cap").get<double>();
    if (ladder.empty()) throw std::invalid_argument("epsilon_ladder must be nonempty");
    for (double e : ladder) {
      if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument("epsilon_ladder entries must lie in (0,1]");
    }
    if (grid < kMinMarginGrid) throw std::invalid_argument("oracle.grid must be at least 64");
    if (!(cap > 0.0 && cap <= 1.0)) throw std::invalid_argument("lemma_cap must lie in (0,1]");
  } catch (const std::exception& e) {
    err << "error: invalid config: " << e.what() << "\n";
    return kInvalidConfig;
  }
  const json& o = cfg.at("oracle");
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();

  json margins = json::array();
  std::vector<std::pair<double, double>> by_eps;
  for (double e : ladder) {
    const auto c = epsilon_margin(e, grid);
    margins.push_back(certificate_json(c));
    by_eps.emplace_back(e, c.margin);
    out << "epsilon " << e << ": margin " << c.margin << (c.certified ? " (certified)" : " (not certified)") << "\n";
  }
  std::sort(by_eps.begin(), by_eps.end());
  bool monotone = true;
  for (std::size_t i = 1; i < by_eps.size(); ++i) monotone = monotone && by_eps[i].second <= by_eps[i - 1].second;

  const auto est = estimate_lemma_constant(o.at("lemma_draws").get<std::int64_t>(), cap, seed, kLemmaStream);
  out << "C_hat = " << est.c_hat << " (cap " << cap << ", " << est.accepted << " of " << est.draws
      << " draws accepted)\n";
  const auto dist = dist_agreement(o.at("dist_matrices").get<std::int64_t>(), o.at("dist_grid").get<int>(), seed);
  out << "dist_so2: max |closed form - brute force| = " << dist.max_abs_diff << " over " << dist.matrices
      << " matrices\n";

  json doc = metadata("oracle", cfg);
  doc["epsilon_margins"] = margins;
  doc["margins_monotone"] = monotone;
  doc["lemma_constant"] = {{"c_hat", est.c_hat},   {"cap", est.cap},           {"draws", est.draws},
                           {"accepted", est.accepted}, {"skipped_zero", est.skipped_zero}, {"seed", seed}};
  doc["dist_so2_agreement"] = {{"max_abs_diff", dist.max_abs_diff},
                               {"matrices", dist.matrices},
                               {"grid", o.at("dist_grid")}};
  try {
    write_file_atomic(out_dir(cfg) / "oracle.json", dump(doc));
  } catch (const std::exception& e) {
    err << "error: writing output failed: " << e.what() << "\n";
    return kInvalidConfig;
  }
  return kOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Monte Carlo sampler and verifier for a hard-disk crystal on a perturbed triangular lattice"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::string config_path;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out_path;
  auto add_globals = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--threads", threads, "worker threads (fallback: HARDLATTICE_THREADS)");
    sub->add_option("--out", out_path, "output directory (overrides the config)");
  };
  ScanFlags scan_flags;
  VerifyFlags verify_flags;
  std::int64_t oracle_every = 0;

  auto* scan_cmd = app.add_subcommand("scan", "run the (N, l) scan and write scan.csv");
  add_globals(scan_cmd);
  scan_cmd->add_flag("--certify-epsilon", scan_flags.certify_epsilon, "print the epsilon certificate");
  scan_cmd->add_flag("--emit-gnuplot", scan_flags.emit_gnuplot, "also write plain-text plot data");
  auto* verify_cmd = app.add_subcommand("verify", "run the identity and oracle suites");
  add_globals(verify_cmd);
  auto* every_opt = verify_cmd->add_option("--omega2-oracle-every", oracle_every,
                                           "exact injectivity check on every K-th sample");
  auto* oracle_cmd = app.add_subcommand("oracle", "epsilon margins, lemma constant, SO(2) distance agreement");
  add_globals(oracle_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidConfig;
  }
  g.config = config_path;
  for (auto* sub : {scan_cmd, verify_cmd, oracle_cmd}) {
    if (sub->count("--seed")) g.seed = seed;
    if (sub->count("--threads")) g.threads = threads;
    if (sub->count("--out")) g.out = out_path;
  }
  if (every_opt->count()) verify_flags.omega2_oracle_every = oracle_every;

  try {
    if (scan_cmd->parsed()) return cmd_scan(g, scan_flags, std::cout, std::cerr);
    if (verify_cmd->parsed()) return cmd_verify(g, verify_flags, std::cout, std::cerr);
    return cmd_oracle(g, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidConfig;
  }
}

}  // namespace hardlattice::cli
