#pragma once

#include <vector>

#include "hardlattice/configuration.hpp"
#include "hardlattice/rng.hpp"
#include "hardlattice/sampler.hpp"

namespace testing_support {

using namespace hardlattice;

// Standard configuration with every movable site shifted by up to `amplitude`
// in each coordinate. Not necessarily admissible.
inline Configuration jittered(int n, double l, double eps, double amplitude, std::uint64_t seed) {
  Rng rng(seed, 99);
  std::vector<Point2> pos = standard_config(n, l, eps).positions();
  for (std::size_t i = 1; i < pos.size(); ++i) {
    pos[i] += Vec2(rng.uniform(-amplitude, amplitude), rng.uniform(-amplitude, amplitude));
  }
  return Configuration(n, l, eps, pos);
}

inline Configuration with_site(const Configuration& cfg, LatticeIndex x, const Point2& p) {
  std::vector<Point2> pos = cfg.positions();
  pos[site_index(x, cfg.n())] = p;
  return Configuration(cfg.n(), cfg.l(), cfg.epsilon(), pos);
}

// A few admissible MCMC states.
inline std::vector<Configuration> mcmc_samples(int n, double l, double eps, std::int64_t sweeps, std::uint64_t seed,
                                               std::int64_t thin = 1) {
  SamplerParams p;
  p.proposal_radius = eps / 10.0;
  p.sweeps = sweeps;
  p.burn_in = 20;
  p.thin = thin;
  p.seed = seed;
  return run_chain(p, n, l, eps);
}

}  // namespace testing_support
