#pragma once

// Monte Carlo experiments reproducing the closed-form laws: leftmost-point
// law, chordal/radial restriction, the non-intersection probability, order
// commutation, target change, and the radial restriction martingale.

#include "slelab/report.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace slelab::expmt {

struct RunOptions {
  std::size_t n_samples = 1000;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  bool parallel = true;  // OpenMP fan-out; the serial path is bit-identical
};

// Deterministic fan-out over sample paths: row r is a pure function of
// (seed, r), merged in fixed order regardless of thread layout.
void run_rows(std::size_t n, std::uint64_t seed, bool parallel, std::size_t ncols,
              const std::function<void(std::size_t run, std::uint64_t seed, double* row)>& fn,
              std::vector<double>& storage);

// --------------------------------------------------------------------------

// P(G <= -g) for plain SLE_8 versus (2/pi) arctan sqrt(g) at one level.
ExperimentReport leftmost_law(double g, const RunOptions& opts);

struct LeftmostCurve {
  std::vector<double> levels_g;
  std::vector<double> reference;  // (2/pi) arctan sqrt(g)
  std::vector<double> empirical;
  double ks_distance = 0.0;
  ExperimentReport ks_report;     // estimate = KS distance vs tolerance
  ExperimentReport at_g1;         // P(G <= -1) vs 1/2
};

// One chain per sample resolves every level; quantile grid p = 0.05..0.95.
LeftmostCurve leftmost_law_curve(const RunOptions& opts);

// --------------------------------------------------------------------------

struct HalfDiskHull {
  double center = 4.0;
  double radius = 1.0;
  double grid_spacing_factor = 0.02;  // boundary grid spacing = factor * radius
};

// |seats| = 1: avoidance frequency vs phi'_A(y)^{5/8}.
ExperimentReport restriction_chordal_single(const HalfDiskHull& hull, double seat,
                                            const RunOptions& opts);

// |seats| = 2: fixed-horizon conservation of the two-seat restriction
// martingale for the SLE_{8/3}(2) pair.
ExperimentReport restriction_chordal_pair(const HalfDiskHull& hull, double seat_left,
                                          double seat_right, double horizon_capacity,
                                          const RunOptions& opts);

// Radial: avoidance of a radial slit by SLE_{8/3} from angle 0 to 0.
ExperimentReport restriction_radial(double slit_angle, double slit_duration,
                                    const RunOptions& opts);

// E[g'_{tau_1}(0)^{5/8}] for SLE_{8/3}(kappa-6) from (x, 1) vs psi_kappa(x).
ExperimentReport nonintersection_psi(double x, const RunOptions& opts);

// --------------------------------------------------------------------------

enum class CommuteCase { kCaseIKappa6, kCaseIIRho2, kNegativeControlRho3 };

// Two-sample KS between growth orders (x then y) vs (y then x); the
// observable vector holds the spectator images and the final seat values.
ExperimentReport commute_order_test(CommuteCase which, const RunOptions& opts);

// Lemma-1 remark: SLE_kappa(kappa-6) from (0,1) versus Moebius-mapped plain
// SLE; observable is the exit angle from the half-disk |z| < 1/2.
ExperimentReport coordinate_change_test(const RunOptions& opts, bool negative_control = false);

// Drift of the Lemma-11 product for radial SLE_{8/3}(2) against a radial slit.
ExperimentReport radial_martingale_drift(double force_angle, double slit_angle,
                                         double slit_duration, double t_end,
                                         const RunOptions& opts);

}  // namespace slelab::expmt
