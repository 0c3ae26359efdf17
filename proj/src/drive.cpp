#include "slelab/drive.hpp"

#include <cmath>
#include <stdexcept>

namespace slelab::drive {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kCascade = 0.1;        // dt_eff = min(dt, kCascade * dist^2)
constexpr int kCascadeFloorBits = 20;   // dt halving floor: dt * 2^-20

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t CounterRng::next_word() {
  std::uint64_t key = splitmix64(seed_ ^ splitmix64(stream_ ^ 0x5851f42d4c957f2dULL));
  return splitmix64(key ^ splitmix64(counter_++));
}

double CounterRng::uniform() {
  // 53-bit mantissa, strictly inside (0, 1)
  return (static_cast<double>(next_word() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = kTwoPi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

// ---------------------------------------------------------------------------
// Chordal driver

double chordal_rho_drift(const RhoSpec& spec, const ChordalChain& chain) {
  double drift = 0.0;
  for (const auto& f : spec.forces) {
    const auto& p = chain.real_points()[f.chain_index];
    if (!p.alive) continue;
    drift += f.rho / (chain.w() - p.g);
  }
  return drift;
}

StepOutcome drive_sle_rho(const RhoSpec& spec, ChordalChain& chain, CounterRng& rng,
                          double dt) {
  StepOutcome out;
  double dt_eff = dt;
  for (const auto& f : spec.forces) {
    const auto& p = chain.real_points()[f.chain_index];
    if (!p.alive) continue;
    double d = p.g - chain.w();
    dt_eff = std::min(dt_eff, kCascade * d * d);
  }
  dt_eff = std::max(dt_eff, dt * std::ldexp(1.0, -kCascadeFloorBits));
  out.dt_eff = dt_eff;

  double dw = chordal_rho_drift(spec, chain) * dt_eff +
              std::sqrt(spec.kappa * dt_eff) * rng.normal();
  chain.step(dw, dt_eff);

  for (const auto& f : spec.forces) {
    auto& p = chain.real_point(f.chain_index);
    if (p.alive && spec.collide_distance > 0.0 &&
        std::abs(p.g - chain.w()) < spec.collide_distance) {
      p.alive = false;
      p.swallow_time = chain.t();
    }
    if (!p.alive) {
      out.collided = true;
      out.collided_index = f.chain_index;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Radial driver

double radial_rho_drift(const RhoSpec& spec, const RadialChain& chain) {
  // d theta = sqrt(kappa) dB + sum (rho_i/2) cot((theta - alpha_i)/2) dt,
  // the angular form of the displayed SDE with its factor 1/2.
  double drift = 0.0;
  for (const auto& f : spec.forces) {
    const auto& p = chain.angle_points()[f.chain_index];
    if (!p.alive) continue;
    double rel = std::remainder(chain.theta() - p.alpha, kTwoPi);
    drift += 0.5 * f.rho / std::tan(0.5 * rel);
  }
  return drift;
}

StepOutcome drive_radial_rho(const RhoSpec& spec, RadialChain& chain, CounterRng& rng,
                             double dt) {
  StepOutcome out;
  double dt_eff = dt;
  for (const auto& f : spec.forces) {
    const auto& p = chain.angle_points()[f.chain_index];
    if (!p.alive) continue;
    double rel = std::remainder(p.alpha - chain.theta(), kTwoPi);
    dt_eff = std::min(dt_eff, kCascade * rel * rel);
  }
  dt_eff = std::max(dt_eff, dt * std::ldexp(1.0, -kCascadeFloorBits));
  out.dt_eff = dt_eff;

  double dtheta = radial_rho_drift(spec, chain) * dt_eff +
                  std::sqrt(spec.kappa * dt_eff) * rng.normal();
  chain.step(dtheta, dt_eff);

  for (const auto& f : spec.forces) {
    if (!chain.angle_points()[f.chain_index].alive) {
      out.collided = true;
      out.collided_index = f.chain_index;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partition drift

double drift_from_partition(const PartitionFunction& psi, double kappa,
                            const std::vector<double>& config, std::size_t growth_index) {
  double v = psi.value(config);
  if (!(std::abs(v) > 1e-300) || !std::isfinite(v)) {
    throw std::domain_error("drive: partition function vanished at the configuration");
  }
  return kappa * psi.dvalue(config, growth_index) / v;
}

// ---------------------------------------------------------------------------
// Multi-seat growth

GrowthSchedule alternating_schedule(std::size_t n_seats, double per_seat_capacity,
                                    double increment) {
  if (increment <= 0.0 || per_seat_capacity <= 0.0) {
    throw std::invalid_argument("drive: schedule needs positive increments");
  }
  GrowthSchedule out;
  long rounds = static_cast<long>(std::ceil(per_seat_capacity / increment));
  double left = per_seat_capacity;
  for (long r = 0; r < rounds; ++r) {
    double inc = std::min(increment, left);
    for (std::size_t s = 0; s < n_seats; ++s) out.push_back({s, inc});
    left -= inc;
  }
  return out;
}

MultiGrowResult grow_multi(std::vector<Seat>& seats, ChordalChain& chain,
                           const GrowthSchedule& schedule, CounterRng& rng) {
  MultiGrowResult res;
  for (const auto& entry : schedule) {
    Seat& seat = seats[entry.seat];
    if (seat.collided) {
      res.aborted = true;
      res.note = "seat grew after collision";
      return res;
    }
    double remaining = entry.capacity;  // original-domain units
    int guard = 0;
    while (remaining > 1e-15) {
      if (++guard > 2000000) {
        res.aborted = true;
        res.note = "substep budget exhausted";
        return res;
      }
      const auto& own = chain.real_points()[seat.point];
      double center = own.g;
      double dforeign = own.deriv;  // product of foreign map derivatives

      // Distance guard against the other seats and any extra force points.
      double dt_img = chain.dt_base();
      auto guard_point = [&](std::size_t idx) {
        const auto& p = chain.real_points()[idx];
        if (!p.alive) return;
        double d = p.g - center;
        dt_img = std::min(dt_img, kCascade * d * d);
      };
      for (std::size_t s = 0; s < seats.size(); ++s) {
        if (s != entry.seat) guard_point(seats[s].point);
      }
      for (const auto& f : seat.extra_forces) guard_point(f.chain_index);
      dt_img = std::max(dt_img, chain.dt_base() * std::ldexp(1.0, -kCascadeFloorBits));
      dt_img = std::min(dt_img, remaining * dforeign * dforeign);
      if (dt_img <= 0.0) break;

      double drift = 0.0;
      for (std::size_t s = 0; s < seats.size(); ++s) {
        if (s == entry.seat) continue;
        const auto& p = chain.real_points()[seats[s].point];
        if (!p.alive) continue;
        drift += seat.rho_to_other_seats / (center - p.g);
      }
      for (const auto& f : seat.extra_forces) {
        const auto& p = chain.real_points()[f.chain_index];
        if (!p.alive) continue;
        drift += f.rho / (center - p.g);
      }

      chain.advance_marked(center, dt_img, static_cast<long>(seat.point));
      double dw = drift * dt_img + std::sqrt(seat.kappa * dt_img) * rng.normal();
      double w_new = center + dw;
      chain.real_point(seat.point).g = w_new;
      remaining -= dt_img / (dforeign * dforeign);
      seat.grown_capacity += dt_img / (dforeign * dforeign);

      // Collision or crossing of any other tracked real point by this seat.
      const double thr = 1e-6 * std::sqrt(chain.dt_base());
      for (std::size_t i = 0; i < chain.real_points().size(); ++i) {
        if (i == seat.point) continue;
        auto& p = chain.real_point(i);
        if (!p.alive) continue;
        bool crossed = (p.g - center) * (p.g - w_new) < 0.0;
        if (crossed || std::abs(p.g - w_new) < thr) {
          p.alive = false;
          p.swallow_time = chain.t();
        }
      }
      for (std::size_t s = 0; s < seats.size(); ++s) {
        if (s == entry.seat) continue;
        if (!chain.real_points()[seats[s].point].alive) {
          seat.collided = true;
          seats[s].collided = true;
        }
      }
      if (seat.collided) {
        res.aborted = true;
        res.note = "seat collision";
        return res;
      }
    }
  }
  return res;
}

}  // namespace slelab::drive
