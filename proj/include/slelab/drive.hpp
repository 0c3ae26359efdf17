#pragma once

// Stochastic driving: counter-based deterministic RNG, chordal and radial
// SLE(kappa, rho) drivers, partition-function drifts, and the interleaved
// multi-seat growth engine with original-domain capacity accounting.

#include "slelab/flow.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace slelab::drive {

using flow::ChordalChain;
using flow::Complex;
using flow::RadialChain;

// Counter-based generator: every variate is a pure function of
// (seed, stream, counter), so replays and thread layouts cannot change paths.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  double uniform();  // (0, 1)
  double normal();   // standard normal via Box-Muller on two uniforms

 private:
  std::uint64_t next_word();
  std::uint64_t seed_, stream_, counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct ForcePoint {
  std::size_t chain_index;  // real-point index in the chain
  double rho;
};

struct RhoSpec {
  double kappa = 8.0 / 3.0;
  std::vector<ForcePoint> forces;
  // Optional early collision declaration: a force point within this distance
  // of the driving counts as collided (the continuum process collides from
  // there almost surely, in capacity time of that order squared).
  double collide_distance = 0.0;
};

struct StepOutcome {
  double dt_eff = 0.0;
  bool collided = false;
  std::size_t collided_index = 0;
};

// Drift terms at the current state: sum_i rho_i/(W - Z_i), and the angular
// radial form with its factor 1/2.
double chordal_rho_drift(const RhoSpec& spec, const ChordalChain& chain);
double radial_rho_drift(const RhoSpec& spec, const RadialChain& chain);

// One SDE step of chordal SLE(kappa, rho): substep-limited dt, drift from the
// alive force points, Gaussian increment, collision detection.
StepOutcome drive_sle_rho(const RhoSpec& spec, ChordalChain& chain, CounterRng& rng,
                          double dt);

// Radial counterpart in angle coordinates (the displayed factor rho_i/2).
StepOutcome drive_radial_rho(const RhoSpec& spec, RadialChain& chain, CounterRng& rng,
                             double dt);

// Partition-function drift b = kappa d_x psi / psi evaluated numerically.
struct PartitionFunction {
  std::function<double(const std::vector<double>&)> value;
  std::function<double(const std::vector<double>&, std::size_t)> dvalue;
};

double drift_from_partition(const PartitionFunction& psi, double kappa,
                            const std::vector<double>& config, std::size_t growth_index);

// ---------------------------------------------------------------------------
// Interleaved multi-seat growth

struct Seat {
  std::size_t point;        // the seat's driving value, stored as a chain real point
  double kappa = 8.0 / 3.0;
  double rho_to_other_seats = 0.0;          // e.g. 2 for the commuting pair
  std::vector<ForcePoint> extra_forces;     // additional (point, rho) pairs
  double grown_capacity = 0.0;              // original-domain units
  bool collided = false;
};

struct ScheduleEntry {
  std::size_t seat;
  double capacity;  // original-domain capacity increment
};

using GrowthSchedule = std::vector<ScheduleEntry>;

GrowthSchedule alternating_schedule(std::size_t n_seats, double per_seat_capacity,
                                    double increment);

struct MultiGrowResult {
  bool aborted = false;        // seat collision or budget exhaustion
  std::string note;
};

// Grow the seats per the schedule.  Every capacity increment is measured in
// the original domain via the seats' co-tracked foreign derivatives.
MultiGrowResult grow_multi(std::vector<Seat>& seats, ChordalChain& chain,
                           const GrowthSchedule& schedule, CounterRng& rng);

}  // namespace slelab::drive
