// Acceptance suite: each criterion prints one PASS/FAIL line; the exit status
// is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hardlattice/analysis.hpp"
#include "hardlattice/cli.hpp"
#include "hardlattice/geometry.hpp"
#include "hardlattice/io.hpp"
#include "hardlattice/observables.hpp"
#include "hardlattice/sampler.hpp"
#include "hardlattice/stats.hpp"
#include "hardlattice/types.hpp"

using namespace hardlattice;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o, double elapsed, double budget) {
  const bool in_time = elapsed <= budget;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::ostringstream os;
  os.precision(4);
  os << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " | " << o.detail << " | " << elapsed
     << " s (budget " << budget << " s" << (in_time ? "" : ", EXCEEDED") << ")";
  std::cout << os.str() << std::endl;
}

// Snapshots shared by criteria 1, 2, 3 and 7.
struct IdentityRun {
  int n;
  double l;
  std::vector<Configuration> samples;
  double acceptance = 0.0;
};

constexpr std::uint64_t kSeed = 20240601;

std::vector<IdentityRun> identity_runs(double& elapsed) {
  const auto t0 = Clock::now();
  std::vector<IdentityRun> runs;
  std::uint64_t stream = 0;
  for (int n : {2, 4, 8}) {
    for (double l : {1.01, 1.05}) {
      SamplerParams p;
      p.proposal_radius = 0.01;
      p.sweeps = 1000;
      p.burn_in = 200;
      p.seed = kSeed;
      IdentityRun run{n, l, {}, 0.0};
      const auto summary = run_chain(p, n, l, 0.1, [&](const Configuration& c, std::int64_t) {
        run.samples.push_back(c);
      }, stream++);
      run.acceptance = summary.acceptance_rate;
      runs.push_back(std::move(run));
    }
  }
  elapsed = seconds_since(t0);
  return runs;
}

std::size_t total_samples(const std::vector<IdentityRun>& runs) {
  std::size_t k = 0;
  for (const auto& r : runs) k += r.samples.size();
  return k;
}

Outcome criterion_area(const std::vector<IdentityRun>& runs) {
  double worst = 0.0;
  std::size_t bad = 0, min_samples = SIZE_MAX;
  for (const auto& r : runs) {
    min_samples = std::min(min_samples, r.samples.size());
    const double closed = area_difference_closed_form(r.n, r.l);
    for (const auto& c : r.samples) {
      const double rel = std::abs(area_difference_sum(c) - closed) / closed;
      worst = std::max(worst, rel);
      bad += !(rel <= 1e-9);
    }
  }
  std::ostringstream os;
  os << total_samples(runs) << " samples (min " << min_samples << " per run), max rel err " << worst;
  return {bad == 0 && min_samples >= 1000, os.str()};
}

Outcome criterion_mean_gradient(const std::vector<IdentityRun>& runs) {
  double worst = 0.0;
  std::size_t bad = 0;
  for (const auto& r : runs) {
    for (const auto& c : r.samples) {
      const double err = (mean_gradient(c) - r.l * Mat2::Identity()).norm();
      worst = std::max(worst, err);
      bad += !(err <= 1e-10);
    }
  }
  std::ostringstream os;
  os << "max |mean grad - l Id|_F " << worst;
  return {bad == 0, os.str()};
}

Outcome criterion_pythagoras(const std::vector<IdentityRun>& runs) {
  double worst = 0.0;
  std::size_t bad = 0;
  for (const auto& r : runs) {
    const Mat2 lid = r.l * Mat2::Identity();
    const double t_area = 2.0 * r.n * r.n * kUnitTriangleArea;
    for (const auto& c : r.samples) {
      const Mat2 rot = rotation(polar_rotation(mean_gradient(c)));
      const double total = l2_gradient_deviation(c, rot);
      const double defect = total - l2_gradient_deviation(c, lid) - t_area * (lid - rot).squaredNorm();
      const double rel = std::abs(defect) / total;
      worst = std::max(worst, rel);
      bad += !(rel <= 1e-9);
    }
  }
  std::ostringstream os;
  os << "max relative defect " << worst;
  return {bad == 0, os.str()};
}

Outcome criterion_bond_means() {
  const int n = 4;
  const double l = 1.05;
  SamplerParams p;
  p.proposal_radius = 0.01;
  p.sweeps = 200000;
  p.burn_in = 2000;
  p.seed = kSeed;
  const std::vector<LatticeIndex> sites{{0, 0}, {1, 2}, {3, 1}};
  // series[site][offset][component]
  std::vector<std::vector<std::array<std::vector<double>, 2>>> series(
      sites.size(), std::vector<std::array<std::vector<double>, 2>>(6));
  const auto summary = run_chain(p, n, l, 0.1, [&](const Configuration& c, std::int64_t) {
    for (std::size_t s = 0; s < sites.size(); ++s) {
      for (std::size_t k = 0; k < 6; ++k) {
        const Vec2 b = bond_vector(c, sites[s], kNeighborOffsets[k]);
        series[s][k][0].push_back(b.x());
        series[s][k][1].push_back(b.y());
      }
    }
  }, 100);
  const std::size_t batches = 50;
  double worst = 0.0;
  std::size_t bad = 0;
  for (std::size_t s = 0; s < sites.size(); ++s) {
    for (std::size_t k = 0; k < 6; ++k) {
      const Vec2 target = l * embed(kNeighborOffsets[k]);
      for (int d = 0; d < 2; ++d) {
        const auto est = batch_means(series[s][k][static_cast<std::size_t>(d)], batches);
        const double z = std::abs(est.mean - target(d)) / est.standard_error;
        worst = std::max(worst, z);
        bad += !(z <= 4.0);
      }
    }
  }
  std::ostringstream os;
  os << p.sweeps << " sweeps, " << batches << " batches, 36 components, max |mean - l z| / SE " << worst
     << ", acceptance " << summary.acceptance_rate;
  return {bad == 0, os.str()};
}

Outcome criterion_dist_and_heron() {
  Rng rng(kSeed, 200);
  double worst_dist = 0.0;
  int matrices = 0;
  while (matrices < 10000) {
    Mat2 m;
    m << rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2);
    if (!(m.determinant() > 0.0)) continue;
    ++matrices;
    worst_dist = std::max(worst_dist, std::abs(dist_so2(m) - dist_so2_bruteforce(m, 3600)));
  }
  // Image triangles of admissible configurations.
  SamplerParams p;
  p.proposal_radius = 0.01;
  p.sweeps = 313;
  p.burn_in = 100;
  p.seed = kSeed;
  double worst_heron = 0.0;
  int tris = 0;
  run_chain(p, 4, 1.05, 0.1, [&](const Configuration& c, std::int64_t) {
    for (const TriangleRef& t : triangles(4)) {
      const auto q = image_corners(c, t);
      const double a = signed_area(q[0], q[1], q[2]);
      const double h = heron_area((q[1] - q[0]).norm(), (q[2] - q[1]).norm(), (q[0] - q[2]).norm());
      worst_heron = std::max(worst_heron, std::abs(h - a) / a);
      ++tris;
    }
  }, 201);
  std::ostringstream os;
  os << matrices << " matrices, max |closed - brute| " << worst_dist << "; " << tris
     << " triangles, max Heron rel err " << worst_heron;
  return {worst_dist <= 2e-3 && worst_heron <= 1e-12 && tris >= 10000, os.str()};
}

Outcome criterion_epsilon() {
  const auto cert = epsilon_margin(0.1);
  const auto sq = verify_squared_bound(0.1, 1000000, kSeed, 300);
  std::ostringstream os;
  os << "margin " << cert.margin << ", uncertified cells " << cert.uncertified_cells << "/" << cert.cells
     << ", lipschitz slack " << cert.lipschitz_slack << "; " << sq.samples << " triples, " << sq.violations
     << " violations, " << sq.derivation_violations << " derivation violations";
  return {cert.margin > 0.0 && cert.certified && sq.samples == 1000000 && sq.ok(), os.str()};
}

Outcome criterion_proof_chain(const std::vector<IdentityRun>& runs) {
  const auto est = estimate_lemma_constant(1000000, 0.1, kSeed, 400);
  std::size_t bad = 0, checked = 0;
  std::string first_failure;
  double worst_triangle = 0.0, worst_dist = 0.0, worst_area = 0.0;
  for (const auto& r : runs) {
    for (const auto& c : r.samples) {
      const auto rep = proof_chain_check(c, est.c_hat);
      ++checked;
      worst_triangle = std::max(worst_triangle, rep.triangle_bound_worst_ratio);
      worst_dist = std::max(worst_dist, rep.dist_l2 / rep.dist_bound);
      worst_area = std::max(worst_area, rep.side_sum / rep.area_bound);
      if (!rep.ok()) {
        if (bad == 0) first_failure = rep.summary();
        ++bad;
      }
    }
  }
  std::ostringstream os;
  os << "C_hat " << est.c_hat << " from " << est.draws << " draws; " << checked - bad << "/" << checked
     << " samples pass; worst ratios (i) " << worst_triangle << " (ii) " << worst_dist << " (iii) " << worst_area;
  if (bad) os << "; first failure: " << first_failure;
  return {bad == 0, os.str()};
}

// Folded or overlapping states built from a base configuration.
std::vector<Configuration> counterexamples(const Configuration& base) {
  const int n = base.n();
  std::vector<Configuration> out;
  // Places the (possibly periodic) image idx at p.
  auto with = [&](const Configuration& from, LatticeIndex idx, const Point2& p) {
    std::vector<Point2> pos = from.positions();
    const LatticeIndex x = canonical(idx, n);
    pos[site_index(x, n)] = p - periodic_shift(period_of(idx, x, n), from.l(), n);
    return Configuration(n, from.l(), from.epsilon(), pos);
  };
  auto mirror = [](const Point2& p, const Point2& a, const Point2& b) {
    const Vec2 d = (b - a).normalized();
    const Vec2 r = p - a;
    return Point2(a + 2.0 * r.dot(d) * d - r);
  };
  // Apex reflected across the opposite edge, Up and Down triangles.
  for (const TriangleRef& t : {TriangleRef{{1, 1}, Orientation::Up}, TriangleRef{{2, 1}, Orientation::Down},
                               TriangleRef{{0, 2}, Orientation::Up}, TriangleRef{{3, 3}, Orientation::Down}}) {
    const auto c = t.corners();
    if (canonical(c[2], n) == LatticeIndex{0, 0}) continue;
    out.push_back(with(base, c[2], mirror(base.position(c[2]), base.position(c[0]), base.position(c[1]))));
  }
  // A site reflected across the line through two adjacent neighbours.
  for (LatticeIndex x : {LatticeIndex{2, 2}, LatticeIndex{1, 3}}) {
    const Point2 a = base.position(x + kNeighborOffsets[0]);
    const Point2 b = base.position(x + kNeighborOffsets[1]);
    out.push_back(with(base, x, mirror(base.at(x), a, b)));
  }
  // Six neighbours wound twice around a vertex.
  for (LatticeIndex x : {LatticeIndex{2, 2}, LatticeIndex{1, 2}}) {
    std::vector<Point2> pos = base.positions();
    for (int k = 0; k < 6; ++k) {
      const double angle = 2.0 * kPi * k / 3.0 + 0.1;
      const double r = k < 3 ? 1.05 : 1.08;
      pos[site_index(canonical(x + kNeighborOffsets[static_cast<std::size_t>(k)], n), n)] =
          base.at(x) + r * Vec2(std::cos(angle), std::sin(angle));
    }
    out.emplace_back(n, base.l(), base.epsilon(), pos);
  }
  // Distant sites made to coincide.
  out.push_back(with(base, {3, 3}, base.at({1, 1})));
  out.push_back(with(base, {2, 0}, base.at({0, 2}) + Vec2(0.01, 0.0)));
  // A site pushed through its neighbour.
  out.push_back(with(base, {1, 1}, base.position(LatticeIndex{2, 1}) + Vec2(0.3, 0.0)));
  out.push_back(with(base, {2, 4}, base.position(LatticeIndex{2, 3}) - Vec2(0.0, 0.3)));
  return out;
}

Outcome criterion_injectivity() {
  const int n = 4;
  std::size_t states = 0, disagreements = 0, rejected_by_both = 0;
  std::uint64_t stream = 500;
  for (double l : {1.01, 1.05, 1.09}) {
    SamplerParams p;
    p.proposal_radius = 0.01;
    p.sweeps = 3500;
    p.thin = 10;
    p.burn_in = 100;
    p.seed = kSeed;
    run_chain(p, n, l, 0.1, [&](const Configuration& c, std::int64_t) {
      ++states;
      const bool fast = check_omega2_fast(c).ok;
      const bool exact = check_omega2_oracle(c).ok;
      disagreements += fast != exact || !fast;
    }, stream++);
  }
  std::size_t constructed = 0, fast_accepted = 0, constructed_disagreements = 0;
  for (const Configuration& base : {standard_config(n, 1.05, 0.1), run_chain(SamplerParams{0.01, 50, 10, 1, kSeed, false},
                                                                               n, 1.05, 0.1, 600).back()}) {
    for (const Configuration& c : counterexamples(base)) {
      ++constructed;
      const bool fast = check_omega2_fast(c).ok;
      const bool exact = check_omega2_oracle(c).ok;
      fast_accepted += fast;
      constructed_disagreements += fast != exact;
      rejected_by_both += !fast && !exact;
    }
  }
  std::ostringstream os;
  os << states << " sampled states, " << disagreements << " disagreements; " << constructed
     << " constructed counterexamples, " << fast_accepted << " accepted by the fast check, "
     << constructed_disagreements << " disagreements";
  return {states >= 1000 && disagreements == 0 && constructed >= 10 && fast_accepted == 0 &&
              constructed_disagreements == 0 && rejected_by_both == constructed,
          os.str()};
}

Outcome criterion_trend() {
  ScanOptions opts;
  opts.n_list = {2, 4, 8};
  opts.l_list = {1.01, 1.1};
  opts.epsilon = 0.2;
  opts.sampler.proposal_radius = 0.02;
  opts.sampler.sweeps = 20000;
  opts.sampler.burn_in = 2000;
  opts.sampler.seed = kSeed;
  opts.batches = 20;
  const auto records = scan(opts);
  const double z = normal_two_sided_quantile(0.95);
  bool ok = true;
  std::ostringstream os;
  os.precision(4);
  os << "eps 0.2;";
  double lo_min = INFINITY, lo_max = 0.0;
  for (std::size_t i = 0; i < opts.n_list.size(); ++i) {
    const ScanRecord& near = records[2 * i];
    const ScanRecord& far = records[2 * i + 1];
    ok = ok && near.identities_ok && far.identities_ok;
    const double near_hi = near.op_id.mean + z * near.op_id.standard_error;
    const double far_lo = far.op_id.mean - z * far.op_id.standard_error;
    ok = ok && near_hi < far_lo;
    lo_min = std::min(lo_min, near.op_id.mean);
    lo_max = std::max(lo_max, near.op_id.mean);
    os << " N=" << near.n << ": " << near.op_id.mean << "+-" << z * near.op_id.standard_error << " vs "
       << far.op_id.mean << "+-" << z * far.op_id.standard_error << ";";
  }
  ok = ok && lo_max <= 2.0 * lo_min;
  os << " spread across N at l=1.01: x" << lo_max / lo_min;
  return {ok, os.str()};
}

Outcome criterion_determinism() {
  const fs::path dir = fs::temp_directory_path() / "hardlattice_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const nlohmann::json config = {
      {"seed", kSeed},
      {"threads", 2},
      {"scan", {{"N", {2, 4}}, {"l", {1.01, 1.05}}, {"sweeps", 2000}, {"burn_in", 200}, {"omega2_oracle_every", 100}}}};
  write_file_atomic(dir / "config.json", config.dump(2));
  std::ostringstream sink;
  std::vector<std::string> csv;
  std::vector<nlohmann::json> meta;
  bool ran = true;
  for (const char* run : {"first", "second"}) {
    cli::GlobalOptions g;
    g.config = dir / "config.json";
    g.out = dir / run;
    ran = ran && cli::cmd_scan(g, cli::ScanFlags{false, true}, sink, sink) == cli::kOk;
    if (!ran) break;
    csv.push_back(read_file(dir / run / "scan.csv"));
    nlohmann::json m = nlohmann::json::parse(read_file(dir / run / "scan.meta.json"));
    m["resolved_config"].erase("output");
    meta.push_back(m);
  }
  const bool same = ran && csv[0] == csv[1] && meta[0] == meta[1];
  std::ostringstream os;
  if (ran) {
    os << "scan.csv " << csv[0].size() << " bytes, identical: " << (same ? "yes" : "no")
       << "; metadata identical apart from the output dir: " << (meta[0] == meta[1] ? "yes" : "no");
  } else {
    os << "scan command failed: " << sink.str();
  }
  fs::remove_all(dir);
  return {same, os.str()};
}

}  // namespace

int main() {
  std::cout << "Acceptance suite (10 criteria)" << std::endl;

  double chain_time = 0.0;
  const auto runs = identity_runs(chain_time);

  auto timed = [](const std::function<Outcome()>& f, double& elapsed) {
    const auto t0 = Clock::now();
    Outcome o = f();
    elapsed = seconds_since(t0);
    return o;
  };
  double t = 0.0;

  Outcome o = timed([&] { return criterion_area(runs); }, t);
  report(1, "area identity, N in {2,4,8}, l in {1.01,1.05}", o, chain_time + t, 120);

  o = timed([&] { return criterion_mean_gradient(runs); }, t);
  report(2, "mean gradient equals l Id on every sample", o, t, 120);

  o = timed([&] { return criterion_pythagoras(runs); }, t);
  report(3, "Pythagoras decomposition about the polar rotation", o, t, 120);

  o = timed(criterion_bond_means, t);
  report(4, "mean bond vector equals l z (N=4, l=1.05)", o, t, 600);

  o = timed(criterion_dist_and_heron, t);
  report(5, "SO(2) distance and Heron oracles", o, t, 60);

  o = timed(criterion_epsilon, t);
  report(6, "epsilon = 0.1 certification and squared side bound", o, t, 60);

  o = timed([&] { return criterion_proof_chain(runs); }, t);
  report(7, "proof chain on every identity-run sample", o, t, 600);

  o = timed(criterion_injectivity, t);
  report(8, "fast injectivity check vs exact overlap oracle (N=4)", o, t, 300);

  o = timed(criterion_trend, t);
  report(9, "order parameter trend in l and uniformity in N", o, t, 1800);

  o = timed(criterion_determinism, t);
  report(10, "byte-identical scan CSV on rerun", o, t, 600);

  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
