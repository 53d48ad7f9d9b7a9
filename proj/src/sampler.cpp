#include "hardlattice/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "hardlattice/geometry.hpp"

namespace hardlattice {

void SamplerParams::validate() const {
  if (!(proposal_radius > 0.0) || !std::isfinite(proposal_radius)) {
    throw std::invalid_argument("proposal_radius must be positive");
  }
  if (sweeps < 0) throw std::invalid_argument("sweeps must be nonnegative");
  if (burn_in < 0) throw std::invalid_argument("burn_in must be nonnegative");
  if (thin < 1) throw std::invalid_argument("thin must be at least 1");
}

Chain::Chain(const Configuration& initial, double proposal_radius, Rng rng, bool random_scan)
    : n_(initial.n()),
      l_(initial.l()),
      epsilon_(initial.epsilon()),
      proposal_radius_(proposal_radius),
      random_scan_(random_scan),
      positions_(initial.positions()),
      rng_(std::move(rng)) {
  if (!(proposal_radius > 0.0)) throw std::invalid_argument("proposal_radius must be positive");

  auto ref = [this](LatticeIndex idx) {
    const LatticeIndex site = canonical(idx, n_);
    return Ref{site_index(site, n_), periodic_shift(period_of(idx, site, n_), l_, n_)};
  };
  topology_.resize(positions_.size());
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const LatticeIndex x = site_from_index(i, n_);
    SiteTopology& t = topology_[i];
    for (std::size_t k = 0; k < 6; ++k) t.neighbors[k] = ref(x + kNeighborOffsets[k]);
    const auto star = vertex_star(x, n_);
    for (std::size_t k = 0; k < 6; ++k) {
      const auto c = star[k].triangle.corners();
      t.star[k] = {star[k].triangle.orientation, {ref(c[0]), ref(c[1]), ref(c[2])}, star[k].slot};
    }
  }
}

Chain Chain::restore(const Configuration& current, double proposal_radius, bool random_scan, const Rng& rng,
                     Counters counters) {
  Chain c(current, proposal_radius, rng, random_scan);
  c.accepted_ = counters.accepted;
  c.proposed_ = counters.proposed;
  return c;
}

double Chain::angle_sum(std::size_t site) const {
  double sum = 0.0;
  for (const StarTriangle& t : topology_[site].star) {
    const auto s = static_cast<std::size_t>(t.slot);
    const Point2 p = at(t.corners[s]);
    sum += turning_angle(at(t.corners[(s + 1) % 3]) - p, at(t.corners[(s + 2) % 3]) - p);
  }
  return sum;
}

bool Chain::locally_admissible(std::size_t site) const {
  const SiteTopology& t = topology_[site];
  const Point2 x = positions_[site];
  const double upper = 1.0 + epsilon_;
  for (const Ref& nb : t.neighbors) {
    const double len = (at(nb) - x).norm();
    if (!(len > 1.0 && len < upper)) return false;
  }
  for (const StarTriangle& tri : t.star) {
    const Point2 p0 = at(tri.corners[0]);
    const double det = gradient_from_edges(tri.orientation, at(tri.corners[1]) - p0, at(tri.corners[2]) - p0)
                           .determinant();
    if (!(det > 0.0)) return false;
  }
  if (!(std::abs(angle_sum(site) - kTwoPi) < kAngleSumTolerance)) return false;
  for (const Ref& nb : t.neighbors) {
    if (!(std::abs(angle_sum(nb.site) - kTwoPi) < kAngleSumTolerance)) return false;
  }
  return true;
}

bool Chain::try_move(LatticeIndex x, const Vec2& displacement) {
  if (!(canonical(x, n_) == x)) throw std::invalid_argument("site_update: site must be canonical");
  if (x == LatticeIndex{0, 0}) throw std::invalid_argument("site_update: site (0,0) is pinned");
  const std::size_t i = site_index(x, n_);
  ++proposed_;
  const Point2 old = positions_[i];
  positions_[i] = old + displacement;
  if (locally_admissible(i)) {
    ++accepted_;
    return true;
  }
  positions_[i] = old;
  return false;
}

bool Chain::site_update(LatticeIndex x) {
  double a = 0.0;
  double b = 0.0;
  do {
    a = 2.0 * rng_.uniform01() - 1.0;
    b = 2.0 * rng_.uniform01() - 1.0;
  } while (a * a + b * b >= 1.0);
  return try_move(x, Vec2(a, b) * proposal_radius_);
}

void Chain::sweep() {
  const std::size_t m = positions_.size();
  for (std::size_t k = 1; k < m; ++k) {
    const std::size_t i = random_scan_ ? 1 + static_cast<std::size_t>(rng_.below(m - 1)) : k;
    site_update(site_from_index(i, n_));
  }
}

Configuration Chain::snapshot() const { return Configuration(n_, l_, epsilon_, positions_); }

ChainSummary run_chain(const SamplerParams& params, int n, double l, double epsilon,
                       const SnapshotObserver& observer, std::uint64_t stream) {
  params.validate();
  Chain chain(standard_config(n, l, epsilon), params.proposal_radius, Rng(params.seed, stream),
              params.random_scan);
  for (std::int64_t s = 0; s < params.burn_in; ++s) chain.sweep();
  ChainSummary summary;
  for (std::int64_t s = 1; s <= params.sweeps; ++s) {
    chain.sweep();
    if (s % params.thin == 0) {
      ++summary.snapshots;
      if (observer) observer(chain.snapshot(), s);
    }
  }
  summary.accepted = chain.accepted();
  summary.proposed = chain.proposed();
  summary.acceptance_rate = chain.acceptance_rate();
  return summary;
}

std::vector<Configuration> run_chain(const SamplerParams& params, int n, double l, double epsilon,
                                     std::uint64_t stream) {
  std::vector<Configuration> out;
  run_chain(params, n, l, epsilon, [&out](const Configuration& c, std::int64_t) { out.push_back(c); }, stream);
  return out;
}

}  // namespace hardlattice
