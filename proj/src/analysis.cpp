#include "hardlattice/analysis.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hardlattice/geometry.hpp"
#include "hardlattice/observables.hpp"

namespace hardlattice {

double triangle_area_or_zero(double a1, double a2, double a3) {
  const double r = (a1 + a2 + a3) * (-a1 + a2 + a3) * (a1 - a2 + a3) * (a1 + a2 - a3);
  return r > 0.0 ? std::sqrt(r) / 4.0 : 0.0;
}

double area_bound_slack(double a1, double a2, double a3) {
  return triangle_area_or_zero(a1, a2, a3) - kUnitTriangleArea - kAreaSlope * ((a1 - 1.0) + (a2 - 1.0) + (a3 - 1.0));
}

namespace {

struct Interval {
  double lo;
  double hi;
};

// Bounds of the area on a box of side lengths via 16 A^2 = 2 sum a^2 b^2 - sum a^4.
Interval area_bounds(const std::array<Interval, 3>& a) {
  auto sq = [](double x) { return x * x; };
  const double up = 2.0 * (sq(a[0].hi * a[1].hi) + sq(a[1].hi * a[2].hi) + sq(a[2].hi * a[0].hi)) -
                    (sq(sq(a[0].lo)) + sq(sq(a[1].lo)) + sq(sq(a[2].lo)));
  const double down = 2.0 * (sq(a[0].lo * a[1].lo) + sq(a[1].lo * a[2].lo) + sq(a[2].lo * a[0].lo)) -
                      (sq(sq(a[0].hi)) + sq(sq(a[1].hi)) + sq(sq(a[2].hi)));
  return {down > 0.0 ? std::sqrt(down) / 4.0 : 0.0, up > 0.0 ? std::sqrt(up) / 4.0 : 0.0};
}

// Bounds of dA/da_i = a_i (a_j^2 + a_k^2 - a_i^2) / (8 A) on the box, given area bounds.
Interval area_partial_bounds(const std::array<Interval, 3>& a, Interval area, int i) {
  const Interval& x = a[static_cast<std::size_t>(i)];
  const Interval& y = a[static_cast<std::size_t>((i + 1) % 3)];
  const Interval& z = a[static_cast<std::size_t>((i + 2) % 3)];
  const double p_lo = y.lo * y.lo + z.lo * z.lo - x.hi * x.hi;
  const double p_hi = y.hi * y.hi + z.hi * z.hi - x.lo * x.lo;
  const double inf = std::numeric_limits<double>::infinity();
  if (!(area.lo > 0.0)) return {p_lo >= 0.0 ? x.lo * p_lo / (8.0 * area.hi) : -inf, inf};
  const double num_lo = p_lo >= 0.0 ? x.lo * p_lo : x.hi * p_lo;
  const double num_hi = p_hi >= 0.0 ? x.hi * p_hi : x.lo * p_hi;
  const double lo = num_lo >= 0.0 ? num_lo / (8.0 * area.hi) : num_lo / (8.0 * area.lo);
  const double hi = num_hi >= 0.0 ? num_hi / (8.0 * area.lo) : num_hi / (8.0 * area.hi);
  return {lo, hi};
}

}  // namespace

EpsilonCertificate epsilon_margin(double epsilon, int grid_points_per_axis) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon_margin: epsilon must lie in (0,1]");
  if (grid_points_per_axis < kMinMarginGrid) {
    throw std::invalid_argument("epsilon_margin: grid must have at least 64 points per axis");
  }
  const int g = grid_points_per_axis;
  const double h = epsilon / (g - 1);
  std::vector<double> axis(static_cast<std::size_t>(g));
  for (int k = 0; k < g; ++k) axis[static_cast<std::size_t>(k)] = (k == g - 1) ? 1.0 + epsilon : 1.0 + k * h;

  const auto gz = static_cast<std::size_t>(g);
  std::vector<double> f(gz * gz * gz);
  auto at = [gz](int i, int j, int k) {
    return (static_cast<std::size_t>(i) * gz + static_cast<std::size_t>(j)) * gz + static_cast<std::size_t>(k);
  };

  EpsilonCertificate cert;
  cert.epsilon = epsilon;
  cert.grid_points_per_axis = g;
  cert.margin = std::numeric_limits<double>::infinity();
  cert.min_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      for (int k = 0; k < g; ++k) {
        const double a1 = axis[static_cast<std::size_t>(i)];
        const double a2 = axis[static_cast<std::size_t>(j)];
        const double a3 = axis[static_cast<std::size_t>(k)];
        const double v = area_bound_slack(a1, a2, a3);
        f[at(i, j, k)] = v;
        if (i == 0 && j == 0 && k == 0) {
          f[at(i, j, k)] = 0.0;  // equilateral unit triangle, exact
          cert.margin = std::min(cert.margin, kAreaSlope);
          continue;
        }
        cert.min_slack = std::min(cert.min_slack, v);
        cert.margin = std::min(cert.margin, v / ((a1 - 1.0) + (a2 - 1.0) + (a3 - 1.0)));
      }
    }
  }

  const double half_diag = h * kSqrt3 / 2.0;
  for (int i = 0; i + 1 < g; ++i) {
    for (int j = 0; j + 1 < g; ++j) {
      for (int k = 0; k + 1 < g; ++k) {
        ++cert.cells;
        const std::array<Interval, 3> box{
            Interval{axis[static_cast<std::size_t>(i)], axis[static_cast<std::size_t>(i + 1)]},
            Interval{axis[static_cast<std::size_t>(j)], axis[static_cast<std::size_t>(j + 1)]},
            Interval{axis[static_cast<std::size_t>(k)], axis[static_cast<std::size_t>(k + 1)]}};
        const Interval area = area_bounds(box);
        double min_partial = std::numeric_limits<double>::infinity();
        double max_abs_partial = 0.0;
        for (int c = 0; c < 3; ++c) {
          const Interval d = area_partial_bounds(box, area, c);
          min_partial = std::min(min_partial, d.lo - kAreaSlope);
          max_abs_partial = std::max({max_abs_partial, std::abs(d.lo - kAreaSlope), std::abs(d.hi - kAreaSlope)});
        }
        // f increases in every coordinate across the cell: f >= f(lower corner).
        if (min_partial >= 0.0 && f[at(i, j, k)] >= 0.0) continue;

        double corner_min = std::numeric_limits<double>::infinity();
        for (int c = 0; c < 8; ++c) {
          corner_min = std::min(corner_min, f[at(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1))]);
        }
        const double allowance = kSqrt3 * max_abs_partial * half_diag;
        if (std::isfinite(allowance)) cert.lipschitz_slack = std::max(cert.lipschitz_slack, allowance);
        if (!(corner_min - allowance > 0.0)) ++cert.uncertified_cells;
      }
    }
  }
  cert.certified = cert.margin > 0.0 && cert.uncertified_cells == 0;
  return cert;
}

bool squared_bound_holds(double epsilon, double a1, double a2, double a3) {
  const double lhs = (a1 - 1.0) * (a1 - 1.0) + (a2 - 1.0) * (a2 - 1.0) + (a3 - 1.0) * (a3 - 1.0);
  const double rhs = 4.0 * kSqrt3 * epsilon * (triangle_area_or_zero(a1, a2, a3) - kUnitTriangleArea);
  return lhs <= rhs;
}

SquaredBoundReport verify_squared_bound(double epsilon, std::int64_t samples, std::uint64_t seed,
                                        std::uint64_t stream) {
  if (!epsilon_margin(epsilon).certified) {
    throw std::domain_error("verify_squared_bound: epsilon is not certified for the first-order area bound");
  }
  Rng rng(seed, stream);
  SquaredBoundReport rep;
  auto draw = [&]() {
    double a = 1.0;
    while (a == 1.0) a = rng.uniform(1.0, 1.0 + epsilon);
    return a;
  };
  for (std::int64_t s = 0; s < samples; ++s) {
    const std::array<double, 3> a{draw(), draw(), draw()};
    ++rep.samples;
    double lhs = 0.0;
    for (double x : a) {
      const double d = x - 1.0;
      lhs += d * d;
      if (d * d > epsilon * d) ++rep.derivation_violations;
    }
    const double rhs = 4.0 * kSqrt3 * epsilon * (triangle_area_or_zero(a[0], a[1], a[2]) - kUnitTriangleArea);
    if (!(lhs <= rhs)) ++rep.violations;
    if (rhs > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
  }
  return rep;
}

double max_side_deviation(const Mat2& a) {
  static const std::array<Vec2, 3> v{Vec2(1.0, 0.0), Vec2(0.5, kSqrt3 / 2.0), Vec2(0.5, -kSqrt3 / 2.0)};
  double m = 0.0;
  for (const Vec2& vi : v) m = std::max(m, std::abs((a * vi).norm() - 1.0));
  return m;
}

LemmaConstantEstimate estimate_lemma_constant(std::int64_t draws, double deviation_cap, std::uint64_t seed,
                                              std::uint64_t stream) {
  if (!(deviation_cap > 0.0 && deviation_cap <= 1.0)) {
    throw std::invalid_argument("estimate_lemma_constant: deviation_cap must lie in (0,1]");
  }
  LemmaConstantEstimate est;
  est.cap = deviation_cap;
  est.seed = seed;
  Rng rng(seed, stream);
  const double w = 2.0 * deviation_cap;
  for (std::int64_t s = 0; s < draws; ++s) {
    ++est.draws;
    const double theta = rng.uniform(0.0, kTwoPi);
    Mat2 e;
    e << rng.uniform(-w, w), rng.uniform(-w, w), rng.uniform(-w, w), rng.uniform(-w, w);
    const Mat2 a = rotation(theta) * (Mat2::Identity() + e);
    if (!(a.determinant() > 0.0)) continue;
    const double dev = max_side_deviation(a);
    if (dev > deviation_cap) continue;
    if (dev == 0.0) {
      ++est.skipped_zero;
      continue;
    }
    ++est.accepted;
    est.c_hat = std::max(est.c_hat, dist_so2_squared(a) / (dev * dev));
  }
  return est;
}

std::string ProofChainReport::summary() const {
  std::ostringstream os;
  os << "triangle bound " << (triangle_bound_ok ? "ok" : "FAIL") << " (worst ratio " << triangle_bound_worst_ratio
     << ", triangle " << worst_triangle << "); dist L2 " << dist_l2 << " <= " << dist_bound << " "
     << (dist_bound_ok ? "ok" : "FAIL") << "; sides " << side_sum << " <= " << area_bound << " "
     << (area_bound_ok ? "ok" : "FAIL") << "; pythagoras rel err " << pythagoras_relative_error << " "
     << (pythagoras_ok ? "ok" : "FAIL");
  return os.str();
}

ProofChainReport proof_chain_check(const Configuration& cfg, double c_hat) {
  ProofChainReport r;
  const auto ts = triangles(cfg.n());
  double dist_sum = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto p = image_corners(cfg, ts[i]);
    double dev = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double len = (p[static_cast<std::size_t>((k + 1) % 3)] - p[static_cast<std::size_t>(k)]).norm();
      dev = std::max(dev, std::abs(len - 1.0));
    }
    const double d2 = dist_so2_squared(triangle_gradient(cfg, ts[i]));
    dist_sum += d2;
    const double bound = c_hat * dev * dev;
    if (!(d2 <= bound)) r.triangle_bound_ok = false;
    const double ratio = bound > 0.0 ? d2 / bound : (d2 > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (ratio > r.triangle_bound_worst_ratio) {
      r.triangle_bound_worst_ratio = ratio;
      r.worst_triangle = i;
    }
  }
  r.side_sum = side_deviation_sum(cfg);
  r.dist_l2 = kUnitTriangleArea * dist_sum;
  // Every undirected bond is counted from both ends.
  r.dist_bound = c_hat * kUnitTriangleArea * 2.0 * r.side_sum;
  r.dist_bound_ok = r.dist_l2 <= r.dist_bound;
  r.area_bound = 4.0 * kSqrt3 * cfg.epsilon() * area_difference_sum(cfg);
  r.area_bound_ok = r.side_sum <= r.area_bound;
  const IdentityReport id = check_identities(cfg);
  r.pythagoras_relative_error = id.pythagoras_relative_error;
  r.pythagoras_ok = id.pythagoras_ok;
  return r;
}

void validate_scan(const ScanOptions& opts) {
  if (opts.n_list.empty() || opts.l_list.empty()) throw std::invalid_argument("scan grid must be nonempty");
  for (int n : opts.n_list) require_lattice_size(n);
  for (double l : opts.l_list) validate_parameters(2, l, opts.epsilon);
  opts.sampler.validate();
  if (opts.batches < 20) throw std::invalid_argument("batch means need at least 20 batches");
  if (opts.sampler.sweeps / opts.sampler.thin < kMinScanSamples) {
    throw std::invalid_argument("scan needs at least 100 samples per grid point (sweeps / thin)");
  }
  if (opts.oracle_every < 0) throw std::invalid_argument("oracle_every must be nonnegative");
}

namespace {

struct AbortPoint {
  std::string why;
};

}  // namespace

ScanRecord scan_point(const ScanOptions& opts, int n, double l, std::uint64_t stream) {
  ScanRecord rec;
  rec.n = n;
  rec.l = l;
  rec.epsilon = opts.epsilon;
  rec.sweeps = opts.sampler.sweeps;

  std::vector<double> op_id;
  std::vector<double> op_lid;
  std::vector<double> dx;
  std::vector<double> dy;
  std::int64_t count = 0;
  auto observer = [&](const Configuration& cfg, std::int64_t sweep) {
    ++count;
    const ObservationRecord obs = observe(cfg);
    double s_id = 0.0;
    double s_lid = 0.0;
    for (std::size_t i = 0; i < obs.op_id.size(); ++i) {
      s_id += obs.op_id[i];
      s_lid += obs.op_lid[i];
    }
    op_id.push_back(s_id / static_cast<double>(obs.op_id.size()));
    op_lid.push_back(s_lid / static_cast<double>(obs.op_lid.size()));
    const Vec2 b = bond_vector(cfg, {0, 0}, {1, 0});
    dx.push_back(b.x());
    dy.push_back(b.y());

    std::ostringstream why;
    why << "sweep " << sweep << ": ";
    const AdmissibilityReport adm = is_admissible(cfg);
    if (!adm.admissible()) {
      why << "sample left the admissible set";
      if (!adm.violations.empty()) why << " (" << describe(adm.violations.front(), n) << ")";
      throw AbortPoint{why.str()};
    }
    if (opts.oracle_every > 0 && count % opts.oracle_every == 0) {
      const ReportFragment exact = check_omega2_oracle(cfg);
      if (!exact.ok) {
        why << "exact injectivity check failed";
        if (!exact.violations.empty()) why << " (" << describe(exact.violations.front(), n) << ")";
        throw AbortPoint{why.str()};
      }
    }
    const IdentityReport id = check_identities(cfg);
    if (!id.ok()) {
      why << "identity failure: mean gradient err " << id.mean_gradient_error << ", area rel err "
          << id.area_relative_error << ", pythagoras rel err " << id.pythagoras_relative_error;
      throw AbortPoint{why.str()};
    }
    if (opts.c_hat) {
      const ProofChainReport pc = proof_chain_check(cfg, *opts.c_hat);
      if (!pc.ok()) {
        why << "proof chain failure: " << pc.summary();
        throw AbortPoint{why.str()};
      }
    }
  };

  try {
    const ChainSummary summary = run_chain(opts.sampler, n, l, opts.epsilon, observer, stream);
    rec.acceptance_rate = summary.acceptance_rate;
    rec.n_samples = summary.snapshots;
    rec.op_id = batch_means(op_id, opts.batches);
    rec.op_lid = batch_means(op_lid, opts.batches);
    rec.bond_dx = batch_means(dx, opts.batches);
    rec.bond_dy = batch_means(dy, opts.batches);
    rec.identities_ok = true;
  } catch (const AbortPoint& a) {
    rec.n_samples = count;
    rec.identities_ok = false;
    rec.diagnostic = a.why;
  }
  return rec;
}

std::vector<ScanRecord> scan(const ScanOptions& opts) {
  validate_scan(opts);
  struct Point {
    int n;
    double l;
  };
  std::vector<Point> grid;
  for (int n : opts.n_list) {
    for (double l : opts.l_list) grid.push_back({n, l});
  }
  for (const Point& p : grid) {
    if (!(p.l < 1.0 + opts.epsilon)) {
      throw std::domain_error("standard configuration is not admissible for l >= 1 + epsilon");
    }
  }

  std::vector<ScanRecord> out(grid.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        out[i] = scan_point(opts, grid[i].n, grid[i].l, i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(grid.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace hardlattice
