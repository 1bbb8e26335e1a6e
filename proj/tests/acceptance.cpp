// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "ltesim/dual.hpp"
#include "ltesim/duality.hpp"
#include "ltesim/forward.hpp"
#include "ltesim/harmonic.hpp"
#include "ltesim/statistics.hpp"

using namespace ltesim;

namespace {

int failures = 0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void criterion(const std::string& id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] %-4s %s | %s | %.1fs\n", o.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(), o.detail.c_str(),
              secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double factorial(unsigned n) { return std::tgamma(n + 1.0); }

// Forward run on a fixed lattice with the default burn-in and thinning M.
SteadyStateSample forward_run(const LatticeDomain& lat, const std::vector<double>& bath, std::size_t m,
                              std::uint64_t events, std::uint64_t seed, std::vector<Observable> observables = {},
                              std::vector<std::size_t> watched = {}, std::uint64_t occupation_stride = 0) {
  ForwardRunConfig c;
  c.lattice = &lat;
  c.bath_mean = bath;
  c.particles = m;
  c.seed = seed;
  c.burn_in_events = default_burn_in(lat.num_sites(), m);
  c.sample_events = events;
  c.thinning = m;
  c.observables = std::move(observables);
  c.watched_sites = std::move(watched);
  c.occupation_stride = occupation_stride;
  return simulate_ness(c);
}

// Fraction of replicas in which every packet ends at the right end of the interval.
struct RightHits {
  double all_right = 0.0;
  double first_right = 0.0;
  double std_error = 0.0;
};

RightHits right_hits(const LatticeDomain& lat, std::size_t m, std::vector<PacketLocation> packets,
                     std::size_t replicas, std::uint64_t seed) {
  DualRunConfig c;
  c.lattice = &lat;
  c.particles = m;
  c.packets = std::move(packets);
  c.seed = seed;
  c.replicas = replicas;
  // T = 0 on the left and 1 on the right turns the product into an indicator.
  const std::size_t right = static_cast<std::size_t>(lat.find_bath({static_cast<int>(std::lround(lat.scale()))}));
  std::vector<double> temps(lat.num_bath(), 0.0);
  temps[right] = 1.0;
  const auto e = estimate_moment_product(c, temps);
  RightHits h;
  h.all_right = e.estimate;
  h.std_error = e.std_error;
  for (const auto& hit : e.hits) h.first_right += hit[0] == right ? 1.0 : 0.0;
  h.first_right /= static_cast<double>(e.hits.size());
  return h;
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");

  // 1. Exact kernel properties.
  criterion("1a", "interior exchange conserves the pool bitwise (10^6 inputs)", [] {
    Rng rng(1001);
    std::size_t bad = 0;
    for (int i = 0; i < 1'000'000; ++i) {
      const double a = rng.exponential(1.0 + 10.0 * rng.uniform());
      const double b = rng.exponential(1.0 + 10.0 * rng.uniform());
      const double p = rng.uniform();
      const auto e = interior_exchange(a, b, p);
      if (e.site + e.particle != a + b || e.site < 0.0 || e.particle < 0.0) ++bad;
    }
    return Outcome{bad == 0, std::to_string(bad) + " violations"};
  });

  criterion("1b", "split subset law for n = 0..4 (10^6 draws each, chi-square p > 1e-3)", [] {
    Rng rng(1002);
    double worst = 1.0;
    std::string per_n;
    for (unsigned n = 0; n <= 4; ++n) {
      std::vector<std::size_t> pooled(n);
      std::iota(pooled.begin(), pooled.end(), std::size_t{0});
      std::vector<double> observed(1u << n, 0.0);
      const int draws = 1'000'000;
      for (int i = 0; i < draws; ++i) {
        const auto s = split_packets(pooled, rng);
        unsigned mask = 0;
        for (auto p : s.carry) mask |= 1u << p;
        observed[mask] += 1.0;
      }
      std::vector<double> expected;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        const auto l = static_cast<unsigned>(__builtin_popcount(mask));
        expected.push_back(draws * factorial(l) * factorial(n - l) / factorial(n + 1));
      }
      const double p = chi_square_test(observed, expected).p_value;
      worst = std::min(worst, p);
      per_n += (n ? " " : "") + fmt("%.3g", p);
    }
    return Outcome{worst > 1e-3, "p-values " + per_n};
  });

  criterion("1c", "zero-time duality check gives equal sides (100 configurations)", [] {
    Rng rng(1003);
    int equal = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const bool two_d = rng.index(2) == 1;
      const auto lat = two_d ? build_lattice(DomainSpec::unit_cube(2), 3.0 + static_cast<double>(rng.index(3)))
                             : build_lattice(DomainSpec::interval(0, 1), 3.0 + static_cast<double>(rng.index(8)));
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
      for (auto& x : temps) x = 0.5 + 2.0 * rng.uniform();
      DualityCheckInput in;
      in.lattice = &lat;
      in.bath_temperature = temps;
      in.particles = m;
      in.packets = packets;
      in.site_energy = xi;
      in.particle_energy = eta;
      in.t_events = 0;
      in.replicas = 8;
      in.seed = rng.next();
      const auto r = duality_check(in);
      if (r.lhs == r.rhs) ++equal;
    }
    return Outcome{equal == 100, std::to_string(equal) + "/100 exactly equal"};
  });

  criterion("1d", "packet conservation and bath permanence on every event (10^6 events)", [] {
    const auto lat = build_lattice(DomainSpec::unit_cube(2), 24);
    Rng rng(1004);
    PacketState s;
    for (int i = 0; i < 6; ++i) s.packets.push_back(PacketLocation::at_site(lat.require_site({12, 12}, "centre")));
    s.packets.push_back(PacketLocation::carried_by(0));
    s.packets.push_back(PacketLocation::at_site(0));
    s.particle_position = InitialParticles{}.draw(lat, 50, rng);
    DualChain chain(lat, s);
    const std::size_t n = s.packets.size();
    std::vector<PacketLocation> prev = chain.state().packets;
    std::size_t violations = 0;
    for (int i = 0; i < 1'000'000; ++i) {
      chain.step(rng);
      const auto& now = chain.state().packets;
      if (now.size() != n || PacketCounts::of(chain.state(), lat).total() != n) ++violations;
      for (std::size_t k = 0; k < n; ++k) {
        if (prev[k].kind == PacketLocation::Kind::Bath && !(now[k] == prev[k])) ++violations;
      }
      prev = now;
    }
    return Outcome{violations == 0, std::to_string(violations) + " violations, " +
                                        std::to_string(chain.absorbed()) + "/" + std::to_string(n) +
                                        " packets absorbed at the end"};
  });

  // 2. Equilibrium.
  criterion("2", "equilibrium moments 1,2,6 and uniform occupation (d=1, L=30, M=30, T=1)", [] {
    const auto lat = build_lattice(DomainSpec::interval(0, 1), 30);
    const std::vector<double> bath(lat.num_bath(), 1.0);
    const std::size_t m = 30;
    const std::uint64_t stride = lat.num_sites() * lat.num_sites() * m;
    const auto s = forward_run(lat, bath, m, 5'000'000, 2002, {}, {}, stride);
    std::size_t bad = 0;
    double worst_rel = 0.0;
    for (std::size_t v = 0; v < lat.num_sites(); ++v) {
      auto rep = site_moment_report(s.site_moments, v, 3);
      exponential_moment_distance(rep, 1.0);
      for (std::size_t i = 0; i < rep.orders.size(); ++i) {
        const double dev = std::abs(rep.empirical[i] - rep.reference[i]);
        const double tol = std::max(0.05 * rep.reference[i], 3.0 * rep.std_errors[i]);
        worst_rel = std::max(worst_rel, dev / rep.reference[i]);
        if (dev > tol) ++bad;
      }
    }
    std::vector<double> observed(s.occupation.begin(), s.occupation.end());
    const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
    const std::vector<double> expected(observed.size(), total / static_cast<double>(observed.size()));
    const auto chi = chi_square_test(observed, expected);
    return Outcome{bad == 0 && chi.p_value > 1e-3,
                   std::to_string(bad) + " of " + std::to_string(3 * lat.num_sites()) +
                       " moments out of tolerance, max rel dev " + fmt("%.3f", worst_rel) + ", occupation p " +
                       fmt("%.3g", chi.p_value) + " over " + std::to_string(s.occupation_snapshots) + " snapshots"};
  });

  // 3 and 5 share one run.
  const auto lat32 = build_lattice(DomainSpec::interval(0, 1), 32);
  const auto bath32 = bath_temperatures(BoundaryTemperature::endpoints(1.0, 2.0), lat32);
  const auto u32 = solve_discrete_harmonic(lat32, bath32);
  const std::size_t centre32 = lat32.require_site({16}, "centre");
  const std::size_t right32 = lat32.require_site({17}, "right of centre");
  SteadyStateSample run3;
  criterion("3", "1d profile vs discrete harmonic field (L=32, T=1..2, M=32)", [&] {
    run3 = forward_run(lat32, bath32, 32, 200'000'000, 2003,
                       {{Observable::Kind::SiteEnergy, centre32, "xi16"}, {Observable::Kind::SiteEnergy, right32, "xi17"}});
    const auto means = run3.site_means();
    std::size_t bad = 0;
    double worst = 0.0;
    double worst_se = 0.0;
    for (std::size_t v = 0; v < lat32.num_sites(); ++v) {
      const double se = batch_means_estimate(run3.site_moments.batch_means(v, 1)).std_error;
      const double dev = std::abs(means[v] - u32.values[v]);
      worst = std::max(worst, dev);
      worst_se = std::max(worst_se, se);
      if (dev > std::max(0.05, 3.0 * se)) ++bad;
    }
    return Outcome{bad == 0, "max |mean - u| " + fmt("%.4f", worst) + ", max SE " + fmt("%.4f", worst_se) + ", " +
                                 std::to_string(bad) + " sites out of tolerance"};
  });

  criterion("4", "2d profile vs discrete harmonic field (L=16, T=1+x, M=|D_L|)", [] {
    const auto lat = build_lattice(DomainSpec::unit_cube(2), 16);
    const auto bath = bath_temperatures(BoundaryTemperature::linear(1.0, {1.0, 0.0}), lat);
    const auto u = solve_discrete_harmonic(lat, bath);
    const auto s = forward_run(lat, bath, lat.num_sites(), 1'000'000'000, 2004);
    const auto means = s.site_means();
    std::size_t bad = 0;
    double worst = 0.0;
    double worst_se = 0.0;
    for (std::size_t v = 0; v < lat.num_sites(); ++v) {
      const double se = batch_means_estimate(s.site_moments.batch_means(v, 1)).std_error;
      const double dev = std::abs(means[v] - u.values[v]);
      worst = std::max(worst, dev);
      worst_se = std::max(worst_se, se);
      if (dev > std::max(0.07, 3.0 * se)) ++bad;
    }
    return Outcome{bad == 0, "max |mean - u| " + fmt("%.4f", worst) + ", max SE " + fmt("%.4f", worst_se) + ", " +
                                 std::to_string(bad) + " of " + std::to_string(lat.num_sites()) +
                                 " sites out of tolerance"};
  });

  criterion("5", "site moments at the centre: E[xi^2] ~ 2u^2, E[xi xi'] ~ u u' (within 10%)", [&] {
    const auto rows = run3.rows();
    const std::vector<MultiIndex> orders = {{2, 0}, {1, 1}};
    const auto rep = empirical_moments(rows, orders);
    const double u = u32.values[centre32];
    const double up = u32.values[right32];
    const double ref2 = 2.0 * u * u;
    const double ref11 = u * up;
    const double d2 = std::abs(rep.empirical[0] - ref2) / ref2;
    const double d11 = std::abs(rep.empirical[1] - ref11) / ref11;
    return Outcome{d2 <= 0.10 && d11 <= 0.10,
                   "E[xi^2] " + fmt("%.4f", rep.empirical[0]) + " +- " + fmt("%.4f", rep.std_errors[0]) + " vs " +
                       fmt("%.4f", ref2) + " (" + fmt("%.1f%%", 100 * d2) + "), E[xi xi'] " +
                       fmt("%.4f", rep.empirical[1]) + " +- " + fmt("%.4f", rep.std_errors[1]) + " vs " +
                       fmt("%.4f", ref11) + " (" + fmt("%.1f%%", 100 * d11) + ")"};
  });

  // 6 and 8 share the lattice.
  const auto lat64 = build_lattice(DomainSpec::interval(0, 1), 64);
  const std::size_t mid64 = lat64.require_site({32}, "centre");
  criterion("6a", "two packets at the centre both exit right: P in [0.22, 0.28] (L=64, M=64, 10^4 replicas)", [&] {
    const auto h = right_hits(lat64, 64, {PacketLocation::at_site(mid64), PacketLocation::at_site(mid64)}, 10'000, 2006);
    return Outcome{h.all_right >= 0.22 && h.all_right <= 0.28,
                   "P(R,R) " + fmt("%.4f", h.all_right) + " +- " + fmt("%.4f", h.std_error)};
  });
  criterion("6b", "one packet at the centre exits right: P in [0.48, 0.52] (L=64, M=64, 10^4 replicas)", [&] {
    const auto h = right_hits(lat64, 64, {PacketLocation::at_site(mid64)}, 10'000, 2106);
    return Outcome{h.all_right >= 0.48 && h.all_right <= 0.52,
                   "P(R) " + fmt("%.4f", h.all_right) + " +- " + fmt("%.4f", h.std_error)};
  });

  criterion("7", "2d product of two packets vs u(centre)^2 (L=24, T=1+x, M=|D_L|, 5000 replicas)", [] {
    const auto lat = build_lattice(DomainSpec::unit_cube(2), 24);
    const auto bath = bath_temperatures(BoundaryTemperature::linear(1.0, {1.0, 0.0}), lat);
    const auto u = solve_discrete_harmonic(lat, bath);
    const std::size_t c = lat.require_site({12, 12}, "centre");
    DualRunConfig cfg;
    cfg.lattice = &lat;
    cfg.particles = lat.num_sites();
    cfg.packets = {PacketLocation::at_site(c), PacketLocation::at_site(c)};
    cfg.seed = 2007;
    cfg.replicas = 5000;
    const auto e = estimate_moment_product(cfg, bath);
    const double ref = u.values[c] * u.values[c];
    const double dev = std::abs(e.estimate - ref);
    return Outcome{dev <= std::max(0.10 * ref, 3.0 * e.std_error),
                   "estimate " + fmt("%.4f", e.estimate) + " +- " + fmt("%.4f", e.std_error) + " vs " +
                       fmt("%.4f", ref)};
  });

  criterion("8", "packets L^0.5 = 8 sites apart around the centre: P(R,R) in [0.22, 0.28]", [&] {
    const Point a = mesoscopic_point(RealPoint{0.5}, 64, 0.5, RealPoint{-0.5});
    const Point b = mesoscopic_point(RealPoint{0.5}, 64, 0.5, RealPoint{0.5});
    const auto h = right_hits(
        lat64, 64, {PacketLocation::at_site(lat64.require_site(a, "a")), PacketLocation::at_site(lat64.require_site(b, "b"))},
        10'000, 2008);
    return Outcome{h.all_right >= 0.22 && h.all_right <= 0.28,
                   "sites " + format_point(a) + " and " + format_point(b) + ", P(R,R) " + fmt("%.4f", h.all_right) +
                       " +- " + fmt("%.4f", h.std_error)};
  });

  criterion("9", "finite-time duality identity (L=5, M=2, t=10, 10^5 replicas per side)", [] {
    const auto lat = build_lattice(DomainSpec::interval(0, 1), 5);
    const auto bath = bath_temperatures(BoundaryTemperature::endpoints(1.0, 2.0), lat);
    const std::vector<PacketLocation> packets = {
        PacketLocation::at_site(lat.require_site(scaled_point(RealPoint{0.5}, 5), "centre"))};
    const std::vector<double> xi(lat.num_sites(), 1.0);
    const std::vector<double> eta(2, 1.0);
    DualityCheckInput in;
    in.lattice = &lat;
    in.bath_temperature = bath;
    in.particles = 2;
    in.packets = packets;
    in.site_energy = xi;
    in.particle_energy = eta;
    in.t_events = 10;
    in.replicas = 100'000;
    in.seed = 2009;
    const auto r = duality_check(in);
    const double diff = std::abs(r.lhs - r.rhs);
    return Outcome{diff <= 3.0 * r.combined_std_error,
                   "LHS " + fmt("%.5f", r.lhs) + ", RHS " + fmt("%.5f", r.rhs) + ", |diff| " + fmt("%.5f", diff) +
                       " vs 3 SE " + fmt("%.5f", 3.0 * r.combined_std_error)};
  });

  // 10 and 11 share one run.
  const auto lat40 = build_lattice(DomainSpec::interval(0, 1), 40);
  const auto bath40 = bath_temperatures(BoundaryTemperature::endpoints(1.0, 2.0), lat40);
  const std::size_t centre40 = lat40.require_site({20}, "centre");
  const std::size_t away40 = lat40.require_site({25}, "five sites away");
  SteadyStateSample run10;
  criterion("10", "Poisson(1) counts at the centre (TV <= 0.05), |corr| <= 0.05 at distance 5 (L=40, M=39)", [&] {
    run10 = forward_run(lat40, bath40, 39, 400'000'000, 2010,
                        {{Observable::Kind::SiteCount, centre40, "n20"}, {Observable::Kind::SiteCount, away40, "n25"}},
                        {centre40});
    const auto rep = poisson_count_test(run10.series, 1.0, 20);
    return Outcome{rep.total_variation[0] <= 0.05 && rep.max_abs_correlation() <= 0.05,
                   "TV " + fmt("%.4f", rep.total_variation[0]) + ", corr " + fmt("%.4f", rep.correlations[0]) +
                       " over " + std::to_string(rep.samples) + " records"};
  });

  criterion("11", "E[xi eta | one particle at the centre] within 15% of u^2", [&] {
    const auto u = solve_discrete_harmonic(lat40, bath40);
    const double ref = u.values[centre40] * u.values[centre40];
    const auto rep = conditional_energy_moments(run10.watched[0], {1, {1}});
    const double dev = std::abs(rep.empirical[0] - ref) / ref;
    return Outcome{dev <= 0.15, "estimate " + fmt("%.4f", rep.empirical[0]) + " +- " + fmt("%.4f", rep.std_errors[0]) +
                                    " vs " + fmt("%.4f", ref) + " (" + fmt("%.1f%%", 100 * dev) + ", " +
                                    std::to_string(rep.samples) + " records)"};
  });

  criterion("12", "sticking-time tail P(kappa > k) <= (2/3)^((k-1)/2) + 3 SE, k = 1..10 (d=2, L=20, 10^4 episodes)", [] {
    const auto lat = build_lattice(DomainSpec::unit_cube(2), 20);
    const std::size_t c = lat.require_site({10, 10}, "centre");
    const std::vector<PacketLocation> pair = {PacketLocation::at_site(c), PacketLocation::at_site(c)};
    std::vector<std::uint64_t> kappa;
    std::uint64_t censored = 0;
    for (std::uint64_t r = 0; kappa.size() < 10'000; ++r) {
      Rng rng = Rng::stream(2012, r);
      const auto s = pair_sticking_time_sample(lat, lat.num_sites(), pair, rng);
      censored += s.censored;
      for (auto k : s.kappa) {
        if (kappa.size() < 10'000) kappa.push_back(k);
      }
    }
    const auto n = static_cast<double>(kappa.size());
    bool ok = true;
    std::string tail;
    for (unsigned k = 1; k <= 10; ++k) {
      const double p =
          static_cast<double>(std::count_if(kappa.begin(), kappa.end(), [k](std::uint64_t x) { return x > k; })) / n;
      const double se = std::sqrt(p * (1.0 - p) / n);
      const double bound = std::pow(2.0 / 3.0, (k - 1.0) / 2.0);
      ok = ok && p <= bound + 3.0 * se;
      if (k <= 4) tail += fmt(" %.4f", p) + fmt("/%.4f", bound);
    }
    return Outcome{ok, "P(kappa>k)/bound for k=1..4:" + tail + ", " + std::to_string(censored) + " censored"};
  });

  criterion("13", "packet 1 exit law unchanged by two extra neighbours: TV <= 0.03 (L=32, 10^4 replicas each)", [&] {
    const std::size_t mid = lat32.require_site({16}, "centre");
    const std::size_t left = lat32.require_site({15}, "left");
    const std::size_t right = lat32.require_site({17}, "right");
    const auto one = right_hits(lat32, 32, {PacketLocation::at_site(mid)}, 10'000, 2013);
    const auto three = right_hits(
        lat32, 32, {PacketLocation::at_site(mid), PacketLocation::at_site(left), PacketLocation::at_site(right)},
        10'000, 2113);
    const double tv = std::abs(one.first_right - three.first_right);
    return Outcome{tv <= 0.03, "P(R) alone " + fmt("%.4f", one.first_right) + ", with neighbours " +
                                   fmt("%.4f", three.first_right) + ", TV " + fmt("%.4f", tv)};
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}
