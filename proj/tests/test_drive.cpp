#include "slelab/drive.hpp"

#include "slelab/specfun.hpp"
#include "test_util.hpp"

using namespace slelab::drive;
using slelab::flow::ChordalChain;
using slelab::flow::Complex;
using slelab::flow::RadialChain;

TEST_CASE(rng_is_reproducible_and_stream_separated) {
  CounterRng a(42, 7), b(42, 7), c(42, 8);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    double va = a.normal(), vb = b.normal(), vc = c.normal();
    if (va != vb) all_equal = false;
    if (va != vc) any_diff = true;
  }
  REQUIRE(all_equal);
  REQUIRE(any_diff);
}

TEST_CASE(rng_moments_sane) {
  CounterRng rng(1, 1);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double v = rng.normal();
    sum += v;
    sq += v * v;
  }
  REQUIRE_CLOSE(sum / n, 0.0, 0.01);
  REQUIRE_CLOSE(sq / n, 1.0, 0.02);
}

TEST_CASE(chordal_drift_examples) {
  ChordalChain chain(0.0, 1e-3);
  RhoSpec plain;
  plain.kappa = 8.0 / 3.0;
  REQUIRE_CLOSE(chordal_rho_drift(plain, chain), 0.0, 0.0);

  std::size_t z = chain.add_real_point("z", 1.0);
  RhoSpec spec;
  spec.forces.push_back({z, 2.0});
  REQUIRE_CLOSE(chordal_rho_drift(spec, chain), -2.0, 1e-15);
}

TEST_CASE(radial_drift_opposite_point_vanishes) {
  RadialChain chain(0.0, 1e-3);
  std::size_t chi = chain.add_angle_point("chi", M_PI);
  RhoSpec spec;
  spec.forces.push_back({chi, 2.0});
  REQUIRE_CLOSE(radial_rho_drift(spec, chain), 0.0, 1e-12);
}

TEST_CASE(radial_modulus_preserved) {
  // The angle representation keeps |xi| = 1 identically; reconstruct and check.
  RadialChain chain(0.3, 1e-3);
  CounterRng rng(5, 0);
  RhoSpec spec;
  spec.kappa = 8.0 / 3.0;
  for (int k = 0; k < 500; ++k) drive_radial_rho(spec, chain, rng, 1e-3);
  Complex xi = std::polar(1.0, chain.theta());
  REQUIRE_CLOSE(std::abs(xi), 1.0, 1e-10);
}

TEST_CASE(noncrossing_for_admissible_rho) {
  // rho = 2 >= kappa/2 - 2: the force point never collides (200 runs, t <= 1).
  int collided = 0;
  for (int run = 0; run < 200; ++run) {
    CounterRng rng(31337, static_cast<std::uint64_t>(run));
    ChordalChain chain(0.0, 1e-3);
    std::size_t z = chain.add_real_point("z", 1.0);
    RhoSpec spec;
    spec.kappa = 8.0 / 3.0;
    spec.forces.push_back({z, 2.0});
    for (int k = 0; k < 1000; ++k) {
      auto out = drive_sle_rho(spec, chain, rng, 1e-3);
      if (out.collided) {
        ++collided;
        break;
      }
    }
  }
  REQUIRE(collided == 0);
}

TEST_CASE(collision_for_attracting_rho) {
  // rho = kappa - 6 = -10/3 < kappa/2 - 2: tau_1 is finite a.s., with a
  // heavy (1/t) tail, so a fixed horizon leaves a small straggler fraction.
  int collided = 0;
  for (int run = 0; run < 200; ++run) {
    CounterRng rng(777, static_cast<std::uint64_t>(run));
    ChordalChain chain(0.5, 1e-3);
    std::size_t z = chain.add_real_point("z", 1.0);
    RhoSpec spec;
    spec.kappa = 8.0 / 3.0;
    spec.forces.push_back({z, 8.0 / 3.0 - 6.0});
    spec.collide_distance = 1e-4;
    while (chain.t() < 50.0) {
      auto out = drive_sle_rho(spec, chain, rng, 1e-3);
      if (out.collided) {
        ++collided;
        break;
      }
    }
  }
  REQUIRE(collided >= 195);
}

TEST_CASE(radial_force_point_survives) {
  // kappa = 8/3, rho = 2: no collision over t in [0,3] (fixed seeds).
  int collided = 0;
  for (int run = 0; run < 100; ++run) {
    CounterRng rng(4242, static_cast<std::uint64_t>(run));
    RadialChain chain(0.0, 1e-3);
    std::size_t chi = chain.add_angle_point("chi", M_PI / 2.0);
    RhoSpec spec;
    spec.kappa = 8.0 / 3.0;
    spec.forces.push_back({chi, 2.0});
    while (chain.t() < 3.0) {
      auto out = drive_radial_rho(spec, chain, rng, 1e-3);
      if (out.collided) {
        ++collided;
        break;
      }
    }
  }
  REQUIRE(collided == 0);
}

TEST_CASE(single_seat_schedule_matches_plain_driver_bitwise) {
  // Dyadic step and budget so the two bookkeeping paths take identical steps.
  const double dt = 0x1.0p-10;       // 1/1024
  const double budget = 64.0 * dt;   // exactly 64 steps
  const std::uint64_t seed = 12, stream = 3;

  ChordalChain chain_a(0.0, dt);
  std::vector<Seat> seats(1);
  seats[0].point = chain_a.add_real_point("seat", 0.0);
  seats[0].kappa = 8.0 / 3.0;
  std::size_t spec_a = chain_a.add_real_point("spec", 2.0);
  CounterRng rng_a(seed, stream);
  auto res = grow_multi(seats, chain_a, {{0, budget}}, rng_a);
  REQUIRE(!res.aborted);

  ChordalChain chain_b(0.0, dt);
  std::size_t spec_b = chain_b.add_real_point("spec", 2.0);
  CounterRng rng_b(seed, stream);
  RhoSpec plain;
  plain.kappa = 8.0 / 3.0;
  for (int k = 0; k < 64; ++k) drive_sle_rho(plain, chain_b, rng_b, dt);

  REQUIRE_CLOSE(chain_a.real_points()[seats[0].point].g, chain_b.w(), 0.0);
  REQUIRE_CLOSE(chain_a.real_points()[spec_a].g, chain_b.real_points()[spec_b].g, 0.0);
  REQUIRE_CLOSE(chain_a.real_points()[spec_a].deriv, chain_b.real_points()[spec_b].deriv,
                0.0);
  REQUIRE_CLOSE(seats[0].grown_capacity, budget, 0.0);
}

TEST_CASE(zero_capacity_second_seat_is_inert) {
  const std::uint64_t seed = 21, stream = 5;
  ChordalChain chain_a(0.0, 1e-3);
  std::vector<Seat> seats(2);
  seats[0].point = chain_a.add_real_point("seat0", 0.0);
  seats[1].point = chain_a.add_real_point("seat1", 1.0);
  for (auto& s : seats) {
    s.kappa = 8.0 / 3.0;
    s.rho_to_other_seats = 2.0;
  }
  CounterRng rng_a(seed, stream);
  auto res = grow_multi(seats, chain_a, {{0, 0.02}}, rng_a);
  REQUIRE(!res.aborted);

  // Equivalent single SLE(2) with the second seat as a plain force point.
  ChordalChain chain_b(0.0, 1e-3);
  std::size_t z = chain_b.add_real_point("z", 1.0);
  RhoSpec spec;
  spec.kappa = 8.0 / 3.0;
  spec.forces.push_back({z, 2.0});
  CounterRng rng_b(seed, stream);
  double grown = 0.0;
  while (grown < 0.02 - 1e-12) {
    auto out = drive_sle_rho(spec, chain_b, rng_b, std::min(1e-3, 0.02 - grown));
    grown += out.dt_eff;
  }
  REQUIRE_CLOSE(chain_a.real_points()[seats[0].point].g, chain_b.w(), 0.0);
  REQUIRE_CLOSE(chain_a.real_points()[seats[1].point].g, chain_b.real_points()[z].g, 0.0);
}

TEST_CASE(partition_drift_constant_psi_is_zero) {
  PartitionFunction psi;
  psi.value = [](const std::vector<double>&) { return 3.7; };
  psi.dvalue = [](const std::vector<double>&, std::size_t) { return 0.0; };
  REQUIRE_CLOSE(drift_from_partition(psi, 8.0 / 3.0, {0.1, 0.9}, 0), 0.0, 0.0);
}

TEST_CASE(partition_drift_matches_rho_two) {
  // psi = (y - x)^{2/kappa}: kappa d_x psi/psi = 2/(x - y).
  double kappa = 8.0 / 3.0;
  PartitionFunction psi;
  psi.value = [kappa](const std::vector<double>& c) {
    return std::pow(c[1] - c[0], 2.0 / kappa);
  };
  psi.dvalue = [kappa](const std::vector<double>& c, std::size_t i) {
    double e = 2.0 / kappa;
    double base = std::pow(c[1] - c[0], e - 1.0);
    return i == 0 ? -e * base : e * base;
  };
  std::vector<double> cfg{0.2, 1.7};
  REQUIRE_CLOSE(drift_from_partition(psi, kappa, cfg, 0), 2.0 / (0.2 - 1.7), 1e-12);

  // Scaling psi by a constant leaves the drift unchanged exactly.
  PartitionFunction scaled = psi;
  scaled.value = [psi](const std::vector<double>& c) { return 5.0 * psi.value(c); };
  scaled.dvalue = [psi](const std::vector<double>& c, std::size_t i) {
    return 5.0 * psi.dvalue(c, i);
  };
  REQUIRE_CLOSE(drift_from_partition(scaled, kappa, cfg, 0),
                drift_from_partition(psi, kappa, cfg, 0), 0.0);
}

TEST_CASE(partition_drift_multisle_hypergeometric) {
  // The n = 2 pair partition function at kappa = 8/3: the symmetric-system
  // solution Pi (x_{2j} - x_{2j-1})^{1-6/kappa} psi_kappa(u), with u the
  // cross ratio sending (x1,x2,x4) to (infty,0,1).
  const double kappa = 8.0 / 3.0;
  auto uval = [](const std::vector<double>& x) {
    return (x[2] - x[1]) * (x[3] - x[0]) / ((x[2] - x[0]) * (x[3] - x[1]));
  };
  PartitionFunction psi;
  psi.value = [&, kappa](const std::vector<double>& x) {
    double pairs = std::pow((x[1] - x[0]) * (x[3] - x[2]), 1.0 - 6.0 / kappa);
    return pairs * slelab::specfun::psi_kappa(uval(x), kappa);
  };
  psi.dvalue = [&, kappa](const std::vector<double>& x, std::size_t i) {
    // analytic: product rule over the pair factor and the cross-ratio factor
    double e = 1.0 - 6.0 / kappa;
    double u = uval(x);
    double pairs = std::pow((x[1] - x[0]) * (x[3] - x[2]), e);
    double f = slelab::specfun::psi_kappa(u, kappa);
    double df = slelab::specfun::dpsi_kappa_dx(u, kappa);
    double dpair = 0.0;
    if (i == 0) dpair = -e / (x[1] - x[0]);
    if (i == 1) dpair = e / (x[1] - x[0]);
    if (i == 2) dpair = -e / (x[3] - x[2]);
    if (i == 3) dpair = e / (x[3] - x[2]);
    double h = 1e-7;
    std::vector<double> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    double du = (uval(xp) - uval(xm)) / (2.0 * h);  // rational, FD is exact enough
    return pairs * (dpair * f + df * du);
  };
  std::vector<double> cfg{-1.0, -0.3, 0.4, 1.5};
  double analytic = drift_from_partition(psi, kappa, cfg, 0);
  REQUIRE(std::isfinite(analytic));

  // Finite-difference oracle on log psi.
  double h = 1e-6;
  std::vector<double> cp = cfg, cm = cfg;
  cp[0] += h;
  cm[0] -= h;
  double fd = kappa * (std::log(psi.value(cp)) - std::log(psi.value(cm))) / (2.0 * h);
  REQUIRE_CLOSE(analytic, fd, 1e-6 * (1.0 + std::abs(fd)));
}

TEST_MAIN()
