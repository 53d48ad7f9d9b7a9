#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hardlattice/configuration.hpp"
#include "hardlattice/sampler.hpp"
#include "hardlattice/stats.hpp"

namespace hardlattice {

// ---------------------------------------------------------------------------
// First-order area bound on the side-length box [1, 1+eps]^3:
//   f(a) = area(a) - sqrt(3)/4 - (1/(4 sqrt 3)) sum(a_i - 1) >= 0.
// ---------------------------------------------------------------------------

inline constexpr double kAreaSlope = 1.0 / (4.0 * kSqrt3);
inline constexpr int kMinMarginGrid = 64;

struct EpsilonCertificate {
  double epsilon = 0.0;
  int grid_points_per_axis = 0;
  // min over grid points of f(a) / sum(a_i - 1); at a = (1,1,1) the limit
  // 1/(4 sqrt 3) is used, where f itself vanishes.
  double margin = 0.0;
  // min of f over grid points other than (1,1,1).
  double min_slack = 0.0;
  // largest cell-wise Lipschitz allowance L_cell * h * sqrt(3)/2 used.
  double lipschitz_slack = 0.0;
  std::size_t cells = 0;
  std::size_t uncertified_cells = 0;
  // f >= 0 on the whole closed box: every cell is covered either by a positive
  // lower bound on all partial derivatives (f increases away from its value at
  // the cell's lower corner) or by corner values minus the Lipschitz allowance.
  bool certified = false;
};

// Area of a triangle with the given sides; 0 for degenerate or impossible sides.
double triangle_area_or_zero(double a1, double a2, double a3);
double area_bound_slack(double a1, double a2, double a3);

EpsilonCertificate epsilon_margin(double epsilon, int grid_points_per_axis = kMinMarginGrid);

struct SquaredBoundReport {
  std::int64_t samples = 0;
  std::int64_t violations = 0;             // sum (a_i-1)^2 > 4 sqrt3 eps (area - sqrt3/4)
  std::int64_t derivation_violations = 0;  // (a-1)^2 > eps (a-1)
  double max_ratio = 0.0;                  // max lhs / rhs
  bool ok() const { return violations == 0 && derivation_violations == 0; }
};

// Checks sum (a_i - 1)^2 <= 4 sqrt(3) eps (area - sqrt(3)/4) on random triples
// in (1, 1+eps)^3. Throws std::domain_error unless eps is certified.
SquaredBoundReport verify_squared_bound(double epsilon, std::int64_t samples, std::uint64_t seed,
                                        std::uint64_t stream = 0);
bool squared_bound_holds(double epsilon, double a1, double a2, double a3);

// ---------------------------------------------------------------------------
// Local rigidity constant: sup of dist(A, SO(2))^2 / max_i (|A v_i| - 1)^2 over
// det A > 0 with max_i ||A v_i| - 1| <= cap, v_1 = (1,0), v_2 = (1/2, sqrt3/2),
// v_3 = v_1 - v_2.
// ---------------------------------------------------------------------------

struct LemmaConstantEstimate {
  double c_hat = 0.0;
  double cap = 0.0;
  std::int64_t draws = 0;
  std::int64_t accepted = 0;
  std::int64_t skipped_zero = 0;
  std::uint64_t seed = 0;
};

double max_side_deviation(const Mat2& a);

// Draws A = R(theta)(Id + E), theta uniform, entries of E uniform in
// [-2 cap, 2 cap]; keeps det A > 0 and max deviation <= cap.
LemmaConstantEstimate estimate_lemma_constant(std::int64_t draws, double deviation_cap, std::uint64_t seed,
                                              std::uint64_t stream = 0);

// ---------------------------------------------------------------------------
// Per-configuration proof chain.
// ---------------------------------------------------------------------------

struct ProofChainReport {
  // (i) dist(grad, SO(2))^2 <= C max_side (len - 1)^2 on every triangle.
  bool triangle_bound_ok = true;
  double triangle_bound_worst_ratio = 0.0;  // max dist^2 / (C max dev^2)
  std::size_t worst_triangle = 0;
  // (ii) ||dist(grad, SO(2))||^2 <= C (sqrt3/4) sum over ordered bond pairs,
  // i.e. C (sqrt3/4) 2 side_deviation_sum.
  double dist_l2 = 0.0;
  double dist_bound = 0.0;
  bool dist_bound_ok = false;
  // (iii) side_deviation_sum <= 4 sqrt3 eps area_difference_sum.
  double side_sum = 0.0;
  double area_bound = 0.0;
  bool area_bound_ok = false;
  // (iv) Pythagoras decomposition.
  double pythagoras_relative_error = 0.0;
  bool pythagoras_ok = false;

  bool ok() const { return triangle_bound_ok && dist_bound_ok && area_bound_ok && pythagoras_ok; }
  std::string summary() const;
};

ProofChainReport proof_chain_check(const Configuration& cfg, double c_hat);

// ---------------------------------------------------------------------------
// (N, l) scan.
// ---------------------------------------------------------------------------

struct ScanOptions {
  std::vector<int> n_list;
  std::vector<double> l_list;
  double epsilon = 0.1;
  SamplerParams sampler;
  unsigned threads = 1;
  std::int64_t oracle_every = 0;  // exact injectivity check every K-th sample, 0 = never
  std::optional<double> c_hat;    // run the proof chain on every sample when set
  std::size_t batches = kDefaultBatches;
};

struct ScanRecord {
  int n = 0;
  double l = 0.0;
  double epsilon = 0.0;
  std::int64_t sweeps = 0;
  std::int64_t n_samples = 0;
  double acceptance_rate = 0.0;
  MeanEstimate op_id;    // per-triangle |grad - Id|^2, averaged over triangles
  MeanEstimate op_lid;   // per-triangle |grad - l Id|^2, averaged over triangles
  MeanEstimate bond_dx;  // bond from site (0,0) along direction 1
  MeanEstimate bond_dy;
  bool identities_ok = false;
  std::string diagnostic;
};

inline constexpr std::int64_t kMinScanSamples = 100;

// Validates grid and sampler settings; throws std::invalid_argument.
void validate_scan(const ScanOptions& opts);

// One chain per grid point (row-major over n_list x l_list, RNG stream = grid
// index), run on up to opts.threads worker threads.
std::vector<ScanRecord> scan(const ScanOptions& opts);

// Runs a single grid point.
ScanRecord scan_point(const ScanOptions& opts, int n, double l, std::uint64_t stream);

}  // namespace hardlattice
