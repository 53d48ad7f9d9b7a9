#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "hardlattice/configuration.hpp"
#include "hardlattice/rng.hpp"

namespace hardlattice {

struct SamplerParams {
  double proposal_radius = 0.01;
  std::int64_t sweeps = 0;
  std::int64_t burn_in = 0;
  std::int64_t thin = 1;
  std::uint64_t seed = 0;
  bool random_scan = false;

  void validate() const;
};

// Metropolis chain for the uniform law on admissible configurations: a site
// other than (0,0) is displaced uniformly within a disk and the move is kept
// iff the configuration stays admissible. Only the constraints touching the
// moved site are rechecked.
class Chain {
 public:
  Chain(const Configuration& initial, double proposal_radius, Rng rng, bool random_scan = false);

  // Returns true if the move was accepted. Throws for x == (0,0).
  bool site_update(LatticeIndex x);
  // Proposes the displacement explicitly (for tests of the acceptance rule).
  bool try_move(LatticeIndex x, const Vec2& displacement);

  // One update per movable site, raster order (or N^2 - 1 random sites).
  void sweep();

  Configuration snapshot() const;
  const std::vector<Point2>& positions() const { return positions_; }

  std::uint64_t accepted() const { return accepted_; }
  std::uint64_t proposed() const { return proposed_; }
  double acceptance_rate() const {
    return proposed_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(proposed_);
  }
  double proposal_radius() const { return proposal_radius_; }
  bool random_scan() const { return random_scan_; }
  const Rng& rng() const { return rng_; }

  struct Counters {
    std::uint64_t accepted = 0;
    std::uint64_t proposed = 0;
  };
  // Rebuilds a chain from checkpointed pieces.
  static Chain restore(const Configuration& current, double proposal_radius, bool random_scan, const Rng& rng,
                       Counters counters);

 private:
  struct Ref {
    std::size_t site;
    Vec2 shift;
  };
  struct StarTriangle {
    Orientation orientation;
    std::array<Ref, 3> corners;
    int slot;
  };
  struct SiteTopology {
    std::array<Ref, 6> neighbors;
    std::array<StarTriangle, 6> star;
  };

  Point2 at(const Ref& r) const { return positions_[r.site] + r.shift; }
  double angle_sum(std::size_t site) const;
  bool locally_admissible(std::size_t site) const;

  int n_;
  double l_;
  double epsilon_;
  double proposal_radius_;
  bool random_scan_;
  std::vector<Point2> positions_;
  std::vector<SiteTopology> topology_;
  Rng rng_;
  std::uint64_t accepted_ = 0;
  std::uint64_t proposed_ = 0;
};

struct ChainSummary {
  double acceptance_rate = 0.0;
  std::uint64_t accepted = 0;
  std::uint64_t proposed = 0;
  std::int64_t snapshots = 0;
};

using SnapshotObserver = std::function<void(const Configuration&, std::int64_t sweep)>;

// Starts at the standard configuration, discards burn_in sweeps, then passes a
// snapshot to the observer after every thin-th of the following sweeps.
ChainSummary run_chain(const SamplerParams& params, int n, double l, double epsilon,
                       const SnapshotObserver& observer, std::uint64_t stream = 0);

std::vector<Configuration> run_chain(const SamplerParams& params, int n, double l, double epsilon,
                                     std::uint64_t stream = 0);

}  // namespace hardlattice
