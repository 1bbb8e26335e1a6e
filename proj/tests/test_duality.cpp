#include <doctest.h>

#include <cmath>

#include "ltesim/duality.hpp"

using namespace ltesim;

TEST_CASE("duality function") {
  const auto lat = build_lattice(DomainSpec::interval(0, 1), 4);
  PacketCounts n;
  n.site = {2, 0, 1};
  n.bath = {1, 0};
  n.carried = {0, 3};
  const std::vector<double> xi = {2.0, 5.0, 3.0};
  const std::vector<double> eta = {7.0, 2.0};
  const std::vector<double> temps = {1.5, 9.0};
  // 2^2/2! · 3 · 2^3/3! · 1.5
  CHECK(duality_function(n, xi, eta, temps) == doctest::Approx(2.0 * 3.0 * (8.0 / 6.0) * 1.5));
  PacketCounts empty;
  empty.site = {0, 0, 0};
  empty.bath = {0, 0};
  empty.carried = {0, 0};
  CHECK(duality_function(empty, xi, eta, temps) == 1.0);
  (void)lat;
}

TEST_CASE("zero time gives identical sides for random configurations") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const double scale = 3.0 + static_cast<double>(rng.index(5));
    const auto lat = build_lattice(DomainSpec::interval(0, 1), scale);
    const std::size_t m = 1 + rng.index(3);
    std::vector<PacketLocation> packets;
    const std::size_t n = rng.index(4);
    for (std::size_t i = 0; i < n; ++i) {
      switch (rng.index(3)) {
        case 0:
          packets.push_back(PacketLocation::at_site(rng.index(lat.num_sites())));
          break;
        case 1:
          packets.push_back(PacketLocation::at_bath(rng.index(lat.num_bath())));
          break;
        default:
          packets.push_back(PacketLocation::carried_by(rng.index(m)));
      }
    }
    std::vector<double> xi(lat.num_sites());
    std::vector<double> eta(m);
    std::vector<double> temps(lat.num_bath());
    for (auto& x : xi) x = rng.exponential(1.0);
    for (auto& x : eta) x = rng.exponential(1.0);
    for (auto& x : temps) x = 0.5 + rng.uniform();
    DualityCheckInput in;
    in.lattice = &lat;
    in.bath_temperature = temps;
    in.particles = m;
    in.packets = packets;
    in.site_energy = xi;
    in.particle_energy = eta;
    in.t_events = 0;
    in.replicas = 4;
    in.seed = static_cast<std::uint64_t>(trial);
    const auto r = duality_check(in);
    CHECK(r.lhs == r.rhs);
    CHECK(r.combined_std_error == 0.0);
  }
}

TEST_CASE("no packets: both sides are 1 at any time") {
  const auto lat = build_lattice(DomainSpec::interval(0, 1), 5);
  const std::vector<double> temps = {1.0, 2.0};
  const std::vector<double> xi(lat.num_sites(), 1.3);
  const std::vector<double> eta(2, 0.4);
  DualityCheckInput in;
  in.lattice = &lat;
  in.bath_temperature = temps;
  in.particles = 2;
  in.site_energy = xi;
  in.particle_energy = eta;
  in.t_events = 25;
  in.replicas = 10;
  const auto r = duality_check(in);
  CHECK(r.lhs == 1.0);
  CHECK(r.rhs == 1.0);
}

TEST_CASE("small system: sides agree at t = 6") {
  const auto lat = build_lattice(DomainSpec::interval(0, 1), 4);
  const std::vector<double> temps = {1.0, 3.0};
  const std::vector<double> xi = {1.0, 2.0, 0.5};
  const std::vector<double> eta = {1.0, 1.5};
  const std::vector<PacketLocation> packets = {PacketLocation::at_site(1), PacketLocation::carried_by(0)};
  DualityCheckInput in;
  in.lattice = &lat;
  in.bath_temperature = temps;
  in.particles = 2;
  in.packets = packets;
  in.site_energy = xi;
  in.particle_energy = eta;
  in.t_events = 6;
  in.replicas = 40000;
  in.seed = 3;
  const auto r = duality_check(in);
  CHECK(std::abs(r.lhs - r.rhs) <= 3.5 * r.combined_std_error);
}
