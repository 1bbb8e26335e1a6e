#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ltesim/dual.hpp"
#include "ltesim/error.hpp"
#include "ltesim/harmonic.hpp"
#include "ltesim/statistics.hpp"

using namespace ltesim;

namespace {

double factorial(unsigned n) { return std::tgamma(n + 1.0); }

// Independent oracle: a given carried subset C of size l out of n has
// probability l!(n-l)!/(n+1)!.
double subset_probability(unsigned n, unsigned l) { return factorial(l) * factorial(n - l) / factorial(n + 1); }

}  // namespace

TEST_CASE("split_packets matches the subset law") {
  Rng rng(2024);
  for (unsigned n = 0; n <= 4; ++n) {
    std::vector<std::size_t> pooled(n);
    std::iota(pooled.begin(), pooled.end(), std::size_t{0});
    const int draws = 200000;
    std::map<unsigned, double> observed;  // bit mask of the carried set
    for (int i = 0; i < draws; ++i) {
      const auto split = split_packets(pooled, rng);
      CHECK(split.stay.size() + split.carry.size() == n);
      unsigned mask = 0;
      for (auto p : split.carry) mask |= 1u << p;
      observed[mask] += 1.0;
    }
    std::vector<double> obs;
    std::vector<double> exp;
    double total_p = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      const auto l = static_cast<unsigned>(__builtin_popcount(mask));
      const double p = subset_probability(n, l);
      total_p += p;
      obs.push_back(observed[mask]);
      exp.push_back(p * draws);
    }
    CHECK(total_p == doctest::Approx(1.0));
    CHECK(chi_square_test(obs, exp).p_value > 1e-3);
  }
  CHECK(subset_probability(1, 0) == doctest::Approx(0.5));
  CHECK(subset_probability(2, 0) == doctest::Approx(1.0 / 3));
  CHECK(subset_probability(2, 1) == doctest::Approx(1.0 / 6));
  CHECK(subset_probability(3, 1) == doctest::Approx(1.0 / 12));
}

TEST_CASE("packet conservation and bath permanence on every event") {
  const auto lat = build_lattice(DomainSpec::unit_cube(2), 5);
  PacketState s;
  s.packets = {PacketLocation::at_site(0), PacketLocation::at_site(0), PacketLocation::at_site(7),
               PacketLocation::carried_by(1), PacketLocation::at_site(12)};
  Rng rng(8);
  s.particle_position = InitialParticles{}.draw(lat, 4, rng);
  DualChain chain(lat, s);
  std::vector<PacketLocation> prev = chain.state().packets;
  for (int i = 0; i < 200000 && !chain.all_absorbed(); ++i) {
    chain.step(rng);
    const auto& now = chain.state().packets;
    REQUIRE(now.size() == 5);
    std::size_t absorbed = 0;
    for (std::size_t k = 0; k < now.size(); ++k) {
      if (prev[k].kind == PacketLocation::Kind::Bath) REQUIRE(now[k] == prev[k]);
      if (now[k].kind == PacketLocation::Kind::Bath) ++absorbed;
    }
    REQUIRE(absorbed == chain.absorbed());
    REQUIRE(PacketCounts::of(chain.state(), lat).total() == 5);
    prev = now;
  }
  CHECK(chain.all_absorbed());
}

TEST_CASE("single packet: gambler's ruin on L=4") {
  const auto lat = build_lattice(DomainSpec::interval(0, 1), 4);
  DualRunConfig c;
  c.lattice = &lat;
  c.particles = 3;
  c.packets = {PacketLocation::at_site(lat.require_site({1}, "t"))};
  c.seed = 11;
  c.replicas = 20000;
  c.workers = 1;
  // T(0) = 0, T(1) = 1 turns the estimate into the probability of exiting right.
  const std::vector<double> temps = {0.0, 1.0};
  const auto e = estimate_moment_product(c, temps);
  CHECK(std::abs(e.estimate - 0.25) < 4 * e.std_error + 1e-3);
}

TEST_CASE("constant temperature gives c^N for every replica") {
  const auto lat = build_lattice(DomainSpec::unit_cube(2), 6);
  DualRunConfig c;
  c.lattice = &lat;
  c.particles = 10;
  c.packets = {PacketLocation::at_site(3), PacketLocation::at_site(3), PacketLocation::carried_by(2)};
  c.seed = 1;
  c.replicas = 50;
  const std::vector<double> temps(lat.num_bath(), 1.7);
  const auto e = estimate_moment_product(c, temps);
  CHECK(e.estimate == doctest::Approx(1.7 * 1.7 * 1.7));
  CHECK(e.std_error == doctest::Approx(0.0));
}

TEST_CASE("replica results do not depend on the worker count") {
  const auto lat = build_lattice(DomainSpec::interval(0, 1), 10);
  DualRunConfig c;
  c.lattice = &lat;
  c.particles = 4;
  c.packets = {PacketLocation::at_site(4), PacketLocation::at_site(5)};
  c.seed = 77;
  c.replicas = 64;
  const std::vector<double> temps = {1.0, 2.0};
  c.workers = 1;
  const auto one = estimate_moment_product(c, temps);
  c.workers = 4;
  const auto four = estimate_moment_product(c, temps);
  CHECK(one.hits == four.hits);
}

TEST_CASE("projected single packet makes uniform nearest-neighbour steps") {
  const auto lat = build_lattice(DomainSpec::unit_cube(2), 30);
  Rng rng(31);
  std::vector<double> dir_counts(4, 0.0);
  for (int rep = 0; rep < 40; ++rep) {
    PacketState s;
    s.packets = {PacketLocation::at_site(lat.require_site({15, 15}, "t"))};
    s.particle_position = InitialParticles{}.draw(lat, 30, rng);
    DualChain chain(lat, s);
    auto where = chain.projected(0);
    while (!chain.all_absorbed()) {
      chain.step(rng);
      const auto now = chain.projected(0);
      if (now == where) continue;
      const Point& a = lat.site(static_cast<std::size_t>(where));
      const Point b = LatticeDomain::is_bath(now) ? lat.bath_point(LatticeDomain::bath_index(now))
                                                  : lat.site(static_cast<std::size_t>(now));
      const int dx = b[0] - a[0];
      const int dy = b[1] - a[1];
      REQUIRE(std::abs(dx) + std::abs(dy) == 1);
      dir_counts[static_cast<std::size_t>(dx != 0 ? (dx < 0 ? 0 : 1) : (dy < 0 ? 2 : 3))] += 1.0;
      where = now;
    }
  }
  const double total = std::accumulate(dir_counts.begin(), dir_counts.end(), 0.0);
  const std::vector<double> expected(4, total / 4);
  CHECK(total > 10000);
  CHECK(chi_square_test(dir_counts, expected).p_value > 1e-3);
}

TEST_CASE("pinned initial particles") {
  const auto lat = build_lattice(DomainSpec::interval(0, 1), 10);
  InitialParticles init{InitialParticles::Kind::Pinned, 4, {0, 2}};
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto pos = init.draw(lat, 5, rng);
    CHECK(pos[0] == 4);
    CHECK(pos[2] == 4);
    CHECK(pos[1] != 4);
    CHECK(pos[3] != 4);
    CHECK(pos[4] != 4);
  }
}

TEST_CASE("sticking episodes") {
  // One site: both carriers stand on it, and the first collapsed step moves
  // exactly one of the packets.
  const auto single = build_lattice(DomainSpec::interval(0, 1), 2);
  REQUIRE(single.num_sites() == 1);
  const std::vector<PacketLocation> carried = {PacketLocation::carried_by(0), PacketLocation::carried_by(1)};
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const auto s = pair_sticking_time_sample(single, 2, carried, rng);
    REQUIRE(!s.kappa.empty());
    CHECK(s.kappa.front() == 1);
  }

  const auto lat = build_lattice(DomainSpec::unit_cube(2), 8);
  const std::vector<PacketLocation> pair = {PacketLocation::at_site(20), PacketLocation::at_site(20)};
  std::size_t episodes = 0;
  for (int i = 0; i < 300; ++i) {
    const auto s = pair_sticking_time_sample(lat, 40, pair, rng);
    for (auto k : s.kappa) CHECK(k >= 1);
    episodes += s.kappa.size();
  }
  CHECK(episodes >= 300);
}

TEST_CASE("step cap turns a long run into StepLimitExceeded") {
  const auto lat = build_lattice(DomainSpec::interval(0, 1), 200);
  DualRunConfig c;
  c.lattice = &lat;
  c.particles = 1;
  c.packets = {PacketLocation::at_site(100)};
  c.step_cap = 10;
  Rng rng(1);
  try {
    run_to_absorption(c, rng);
    FAIL("expected StepLimitExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StepLimitExceeded);
  }
}
