#include "ltesim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "ltesim/duality.hpp"
#include "ltesim/error.hpp"
#include "ltesim/forward.hpp"
#include "ltesim/harmonic.hpp"
#include "ltesim/replicas.hpp"
#include "ltesim/statistics.hpp"

#ifndef LTESIM_VERSION
#define LTESIM_VERSION "0.0.0"
#endif

namespace ltesim {

using nlohmann::json;

std::string tool_version() { return LTESIM_VERSION; }

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::cell(double value) { return cell(format_real(value)); }
CsvTable& CsvTable::cell(std::int64_t value) { return cell(std::to_string(value)); }
CsvTable& CsvTable::cell(std::uint64_t value) { return cell(std::to_string(value)); }

CsvTable& CsvTable::cell(const std::string& value) {
  if (rows_.empty()) rows_.emplace_back();
  rows_.back().push_back(value);
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i != 0) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::IoFailure, "cannot create '" + path.parent_path().string() + "': " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorKind::IoFailure, "write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::IoFailure, "cannot rename onto '" + path.string() + "'");
  }
}

namespace {

constexpr std::uint32_t kStickingTag = 3;

struct Setup {
  LatticeDomain lattice;
  std::size_t particles;
  std::vector<double> bath;

  explicit Setup(const RunConfig& c)
      : lattice(build_lattice(c.domain, c.scale)),
        particles(resolved_particles(c, lattice)),
        bath(bath_temperatures(c.temperature.build(c.domain), lattice)) {}
};

std::vector<std::string> coordinate_columns(const std::string& stem, int d) {
  std::vector<std::string> out;
  for (int a = 0; a < d; ++a) out.push_back(stem + std::to_string(a));
  return out;
}

void point_cells(CsvTable& t, const Point& p) {
  for (int x : p) t.cell(static_cast<std::int64_t>(x));
}

json moment_report_json(const MomentReport& r) {
  json j;
  j["samples"] = r.samples;
  j["max_relative_deviation"] = r.max_relative_deviation;
  j["orders"] = json::array();
  for (std::size_t i = 0; i < r.orders.size(); ++i) {
    json o = {{"order", r.orders[i]}, {"empirical", r.empirical[i]}, {"std_error", r.std_errors[i]}};
    if (i < r.reference.size()) o["reference"] = r.reference[i];
    j["orders"].push_back(o);
  }
  return j;
}

ForwardRunConfig forward_config(const RunConfig& c, const Setup& s) {
  ForwardRunConfig f;
  f.lattice = &s.lattice;
  f.bath_mean = s.bath;
  f.particles = s.particles;
  f.seed = c.seed;
  f.burn_in_events = c.sampling.burn_in.value_or(default_burn_in(s.lattice.num_sites(), s.particles));
  f.sample_events = c.sampling.events;
  f.thinning = c.sampling.thinning.value_or(s.particles);
  f.batches = c.sampling.batches;
  return f;
}

std::uint64_t occupation_stride(const RunConfig& c, const Setup& s) {
  if (c.occupation_stride != 0) return c.occupation_stride;
  const std::uint64_t n = s.lattice.num_sites();
  return n * n * s.particles;
}

std::vector<SteadyStateSample> run_forward_replicas(const RunConfig& c, const ForwardRunConfig& base) {
  return run_replicas(c.replicas, c.workers, [&](std::size_t r) {
    ForwardRunConfig f = base;
    f.stream = r;
    return simulate_ness(f);
  });
}

struct SiteSummary {
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> std_error;
  BathFlux flux;
};

SiteSummary summarize_sites(const std::vector<SteadyStateSample>& runs, std::size_t sites, std::size_t bath) {
  SiteSummary out;
  out.mean.assign(sites, 0.0);
  out.variance.assign(sites, 0.0);
  out.std_error.assign(sites, 0.0);
  out.flux = BathFlux(bath);
  const auto n = static_cast<double>(runs.size());
  std::vector<std::vector<double>> per_replica(sites);
  for (const auto& run : runs) {
    const auto m = run.site_means();
    const auto v = run.site_variances();
    for (std::size_t i = 0; i < sites; ++i) {
      out.mean[i] += m[i] / n;
      out.variance[i] += v[i] / n;
      per_replica[i].push_back(m[i]);
    }
    out.flux.merge(run.flux);
  }
  for (std::size_t i = 0; i < sites; ++i) {
    out.std_error[i] = runs.size() >= 2
                           ? iid_estimate(per_replica[i]).std_error
                           : batch_means_estimate(runs.front().site_moments.batch_means(i, 1)).std_error;
  }
  return out;
}

json flux_json(const BathFlux& f) {
  std::uint64_t interactions = 0;
  double injected = 0.0;
  double discarded = 0.0;
  for (std::size_t b = 0; b < f.interactions.size(); ++b) {
    interactions += f.interactions[b];
    injected += f.injected[b];
    discarded += f.discarded[b];
  }
  return {{"interactions", interactions},
          {"injected", injected},
          {"discarded", discarded},
          {"net_into_system", injected - discarded},
          {"per_point", {{"interactions", f.interactions}, {"injected", f.injected}, {"discarded", f.discarded}}}};
}

json run_forward_ness(const RunConfig& c, const Setup& s, CsvTable& table) {
  const auto& lat = s.lattice;
  ForwardRunConfig f = forward_config(c, s);
  std::vector<Point> observe = c.observe;
  if (observe.empty()) observe = lat.sites();
  for (const auto& p : observe) {
    f.observables.push_back(
        {Observable::Kind::SiteEnergy, lat.require_site(p, "observe"), "xi" + format_point(p)});
  }
  const auto runs = run_forward_replicas(c, f);

  std::vector<std::string> header{"replica", "record"};
  for (const auto& o : f.observables) header.push_back(o.name);
  table = CsvTable(header);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (std::size_t k = 0; k < runs[r].records; ++k) {
      table.row().cell(static_cast<std::uint64_t>(r)).cell(static_cast<std::uint64_t>(k));
      for (const auto& series : runs[r].series) table.cell(series[k]);
    }
  }

  const auto sites = summarize_sites(runs, lat.num_sites(), lat.num_bath());
  const auto u = solve_discrete_harmonic(lat, s.bath);
  json per_site = json::array();
  double worst = 0.0;
  for (std::size_t v = 0; v < lat.num_sites(); ++v) {
    per_site.push_back({{"site", lat.site(v)},
                        {"mean", sites.mean[v]},
                        {"variance", sites.variance[v]},
                        {"std_error", sites.std_error[v]},
                        {"harmonic", u.values[v]}});
    worst = std::max(worst, std::abs(sites.mean[v] - u.values[v]));
  }
  return {{"records_per_replica", runs.front().records},
          {"sites", per_site},
          {"max_abs_deviation_from_harmonic", worst},
          {"bath_flux", flux_json(sites.flux)}};
}

json run_equilibrium(const RunConfig& c, const Setup& s, CsvTable& table) {
  const auto& lat = s.lattice;
  ForwardRunConfig f = forward_config(c, s);
  f.occupation_stride = occupation_stride(c, s);
  const auto runs = run_forward_replicas(c, f);
  const double theta = c.temperature.value;

  table = CsvTable([&] {
    auto h = coordinate_columns("v", lat.dimension());
    h.insert(h.end(), {"order", "empirical", "reference", "std_error"});
    return h;
  }());

  json per_site = json::array();
  double worst = 0.0;
  double worst_in_se = 0.0;
  for (std::size_t v = 0; v < lat.num_sites(); ++v) {
    MomentReport rep;
    if (runs.size() == 1) {
      rep = site_moment_report(runs.front().site_moments, v, static_cast<int>(c.max_order));
    } else {
      rep.samples = 0;
      for (unsigned k = 1; k <= c.max_order; ++k) {
        std::vector<double> means;
        for (const auto& run : runs) means.push_back(run.site_moments.mean(v, static_cast<int>(k)));
        const Estimate e = iid_estimate(means);
        rep.orders.push_back({k});
        rep.empirical.push_back(e.value);
        rep.std_errors.push_back(e.std_error);
      }
      for (const auto& run : runs) rep.samples += static_cast<std::size_t>(run.site_moments.records());
    }
    worst = std::max(worst, exponential_moment_distance(rep, theta));
    for (std::size_t i = 0; i < rep.orders.size(); ++i) {
      table.row();
      point_cells(table, lat.site(v));
      table.cell(static_cast<std::uint64_t>(rep.orders[i][0]))
          .cell(rep.empirical[i])
          .cell(rep.reference[i])
          .cell(rep.std_errors[i]);
      if (rep.std_errors[i] > 0.0) {
        worst_in_se = std::max(worst_in_se, std::abs(rep.empirical[i] - rep.reference[i]) / rep.std_errors[i]);
      }
    }
    json site_json = moment_report_json(rep);
    site_json["site"] = lat.site(v);
    per_site.push_back(site_json);
  }

  std::vector<double> observed(lat.num_sites(), 0.0);
  double total = 0.0;
  for (const auto& run : runs) {
    for (std::size_t v = 0; v < observed.size(); ++v) {
      observed[v] += static_cast<double>(run.occupation[v]);
      total += static_cast<double>(run.occupation[v]);
    }
  }
  std::vector<double> expected(observed.size(), total / static_cast<double>(observed.size()));
  const ChiSquare chi = chi_square_test(observed, expected);

  return {{"theta", theta},
          {"moments", per_site},
          {"max_relative_deviation", worst},
          {"max_deviation_in_std_errors", worst_in_se},
          {"occupation",
           {{"stride_events", f.occupation_stride},
            {"counts", observed},
            {"chi_square", chi.statistic},
            {"dof", chi.dof},
            {"p_value", chi.p_value}}},
          {"bath_flux", flux_json(summarize_sites(runs, lat.num_sites(), lat.num_bath()).flux)}};
}

json run_harmonic(const RunConfig& c, const Setup& s, CsvTable& table) {
  const auto& lat = s.lattice;
  HarmonicSolverOptions opts;
  opts.tolerance = c.tolerance;
  const auto field = solve_discrete_harmonic(lat, s.bath, opts);
  auto header = coordinate_columns("v", lat.dimension());
  header.push_back("u");
  table = CsvTable(header);
  for (std::size_t v = 0; v < lat.num_sites(); ++v) {
    table.row();
    point_cells(table, lat.site(v));
    table.cell(field.values[v]);
  }
  json out = {{"residual", field.residual}, {"iterations", field.iterations}, {"sites", lat.num_sites()}};
  if (c.probe) {
    const Point p = scaled_point(*c.probe, c.scale);
    const std::size_t v = lat.require_site(p, "probe");
    json probe = {{"site", p}, {"harmonic", field.values[v]}};
    if (c.replicas >= 2) {
      const auto h = hitting_estimate_ssrw(lat, s.bath, v, c.replicas, c.seed, c.workers);
      probe["walk_estimate"] = h.estimate;
      probe["walk_std_error"] = h.std_error;
      probe["replicas"] = h.replicas;
    }
    out["probe"] = probe;
  }
  return out;
}

DualRunConfig dual_config(const RunConfig& c, const Setup& s) {
  DualRunConfig d;
  d.lattice = &s.lattice;
  d.particles = s.particles;
  d.packets = resolve_packets(c, s.lattice);
  d.seed = c.seed;
  d.replicas = c.replicas;
  d.step_cap = c.step_cap;
  d.workers = c.workers;
  return d;
}

json run_dual_hitting(const RunConfig& c, const Setup& s, CsvTable& table) {
  const auto& lat = s.lattice;
  const DualRunConfig d = dual_config(c, s);
  const auto est = estimate_moment_product(d, s.bath);

  auto header = std::vector<std::string>{"replica", "packet"};
  const auto coords = coordinate_columns("b", lat.dimension());
  header.insert(header.end(), coords.begin(), coords.end());
  header.push_back("T");
  table = CsvTable(header);
  std::map<std::vector<std::size_t>, std::uint64_t> joint;
  for (std::size_t r = 0; r < est.hits.size(); ++r) {
    for (std::size_t i = 0; i < est.hits[r].size(); ++i) {
      const std::size_t b = est.hits[r][i];
      table.row().cell(static_cast<std::uint64_t>(r)).cell(static_cast<std::uint64_t>(i));
      point_cells(table, lat.bath_point(b));
      table.cell(s.bath[b]);
    }
    ++joint[est.hits[r]];
  }

  json out = {{"estimate", est.estimate}, {"std_error", est.std_error}, {"replicas", est.replicas}};
  json placement = json::array();
  bool all_sites = true;
  double product = 1.0;
  const auto u = solve_discrete_harmonic(lat, s.bath);
  for (const auto& p : d.packets) {
    switch (p.kind) {
      case PacketLocation::Kind::Site:
        placement.push_back({{"site", lat.site(static_cast<std::size_t>(p.index))}});
        product *= u.values[static_cast<std::size_t>(p.index)];
        break;
      case PacketLocation::Kind::Bath:
        placement.push_back({{"bath", lat.bath_point(static_cast<std::size_t>(p.index))}});
        product *= s.bath[static_cast<std::size_t>(p.index)];
        break;
      case PacketLocation::Kind::Carried:
        placement.push_back({{"carried_by", p.index}});
        all_sites = false;
        break;
    }
  }
  out["packets"] = placement;
  if (all_sites) out["harmonic_product"] = product;

  // Per-packet and joint hitting frequencies when the outcome space is small.
  json marginals = json::array();
  for (std::size_t i = 0; i < d.packets.size(); ++i) {
    std::map<std::size_t, std::uint64_t> m;
    for (const auto& h : est.hits) ++m[h[i]];
    json mj = json::array();
    for (const auto& [b, n] : m) {
      mj.push_back({{"bath", lat.bath_point(b)}, {"frequency", static_cast<double>(n) / est.hits.size()}});
    }
    marginals.push_back(mj);
  }
  out["marginals"] = marginals;
  if (joint.size() <= 64) {
    json jj = json::array();
    for (const auto& [key, n] : joint) {
      json pts = json::array();
      for (auto b : key) pts.push_back(lat.bath_point(b));
      jj.push_back({{"bath", pts}, {"frequency", static_cast<double>(n) / est.hits.size()}});
    }
    out["joint"] = jj;
  }
  return out;
}

json run_duality_check(const RunConfig& c, const Setup& s, CsvTable& table) {
  const auto& lat = s.lattice;
  const auto packets = resolve_packets(c, lat);
  const std::vector<double> xi(lat.num_sites(), c.initial_energy);
  const std::vector<double> eta(s.particles, c.initial_energy);
  DualityCheckInput in;
  in.lattice = &lat;
  in.bath_temperature = s.bath;
  in.particles = s.particles;
  in.packets = packets;
  in.site_energy = xi;
  in.particle_energy = eta;
  in.t_events = c.t_events;
  in.replicas = c.replicas;
  in.seed = c.seed;
  in.workers = c.workers;
  const auto r = duality_check(in);
  table = CsvTable({"side", "mean", "std_error"});
  table.row().cell(std::string("lhs")).cell(r.lhs).cell(r.lhs_std_error);
  table.row().cell(std::string("rhs")).cell(r.rhs).cell(r.rhs_std_error);
  const double diff = std::abs(r.lhs - r.rhs);
  return {{"lhs", r.lhs},
          {"rhs", r.rhs},
          {"lhs_std_error", r.lhs_std_error},
          {"rhs_std_error", r.rhs_std_error},
          {"combined_std_error", r.combined_std_error},
          {"abs_difference", diff},
          {"difference_in_std_errors", r.combined_std_error > 0.0 ? diff / r.combined_std_error : 0.0},
          {"replicas_per_side", r.replicas},
          {"t_events", c.t_events}};
}

json run_poisson(const RunConfig& c, const Setup& s, CsvTable& table) {
  const auto& lat = s.lattice;
  ForwardRunConfig f = forward_config(c, s);
  const Point centre = scaled_point(c.site, c.scale);
  std::vector<Point> points;
  for (const auto& off : c.count_offsets) {
    Point p = centre;
    for (std::size_t a = 0; a < p.size(); ++a) p[a] += off[a];
    points.push_back(p);
    f.observables.push_back({Observable::Kind::SiteCount, lat.require_site(p, "count_offsets"), "n" + format_point(p)});
  }
  const auto runs = run_forward_replicas(c, f);
  std::vector<std::vector<double>> counts(points.size());
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      counts[i].insert(counts[i].end(), run.series[i].begin(), run.series[i].end());
    }
  }
  const double alpha = static_cast<double>(s.particles) / static_cast<double>(lat.num_sites());
  const auto rep = poisson_count_test(counts, alpha, c.cap);
  const auto q = poisson_buckets(alpha, c.cap);

  std::vector<std::string> header{"count", "poisson"};
  for (const auto& o : f.observables) header.push_back(o.name);
  table = CsvTable(header);
  for (std::size_t k = 0; k <= c.cap; ++k) {
    table.row().cell(static_cast<std::uint64_t>(k)).cell(q[k]);
    for (const auto& dist : rep.distribution) table.cell(dist[k]);
  }

  json sites = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    sites.push_back({{"site", points[i]}, {"total_variation", rep.total_variation[i]}});
  }
  json pairs = json::array();
  std::size_t idx = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      pairs.push_back({{"sites", {points[i], points[j]}}, {"correlation", rep.correlations[idx++]}});
    }
  }
  return {{"alpha", alpha},
          {"cap", c.cap},
          {"samples", rep.samples * runs.size() / std::max<std::size_t>(runs.size(), 1)},
          {"sites", sites},
          {"correlations", pairs},
          {"max_total_variation", rep.max_total_variation()},
          {"max_abs_correlation", rep.max_abs_correlation()}};
}

json run_conditional(const RunConfig& c, const Setup& s, CsvTable& table) {
  const auto& lat = s.lattice;
  ForwardRunConfig f = forward_config(c, s);
  const Point centre = scaled_point(c.site, c.scale);
  const std::size_t v = lat.require_site(centre, "site");
  f.watched_sites = {v};
  const auto runs = run_forward_replicas(c, f);
  std::vector<SiteRecord> records;
  for (const auto& run : runs) records.insert(records.end(), run.watched[0].begin(), run.watched[0].end());

  ConditionalOrders orders{c.site_order, c.particle_orders};
  MomentReport rep = conditional_energy_moments(records, orders, c.min_occurrences, c.sampling.batches);
  const auto u = solve_discrete_harmonic(lat, s.bath);
  exponential_moment_distance(rep, u.values[v]);

  table = CsvTable({"K", "order", "empirical", "reference", "std_error", "samples"});
  std::string order_text;
  for (std::size_t i = 0; i < rep.orders[0].size(); ++i) {
    if (i != 0) order_text += ';';
    order_text += std::to_string(rep.orders[0][i]);
  }
  table.row()
      .cell(static_cast<std::uint64_t>(c.particle_orders.size()))
      .cell(order_text)
      .cell(rep.empirical[0])
      .cell(rep.reference[0])
      .cell(rep.std_errors[0])
      .cell(static_cast<std::uint64_t>(rep.samples));

  json out = moment_report_json(rep);
  out["site"] = centre;
  out["K"] = c.particle_orders.size();
  out["u"] = u.values[v];
  out["records"] = records.size();
  return out;
}

json run_sticking(const RunConfig& c, const Setup& s, CsvTable& table) {
  const auto& lat = s.lattice;
  const auto pair = resolve_packets(c, lat);
  const unsigned workers = resolve_workers(c.workers);
  const std::size_t chunk = std::max<std::size_t>(16, 4 * static_cast<std::size_t>(workers));

  // Replicas are consumed in index order, so the first `episodes` values do
  // not depend on the chunk size.
  std::vector<std::uint64_t> kappa;
  std::uint64_t censored = 0;
  std::size_t used = 0;
  std::size_t next = 0;
  while (kappa.size() < c.episodes) {
    if (next > 1'000'000'000ULL) throw Error(ErrorKind::InsufficientSamples, "no sticking episodes observed");
    const auto samples = run_replicas(chunk, c.workers, [&](std::size_t i) {
      Rng rng = Rng::stream(c.seed, next + i, kStickingTag);
      return pair_sticking_time_sample(lat, s.particles, pair, rng, c.step_cap);
    });
    for (const auto& smp : samples) {
      if (kappa.size() >= c.episodes) break;
      ++used;
      censored += smp.censored;
      for (auto k : smp.kappa) {
        if (kappa.size() < c.episodes) kappa.push_back(k);
      }
    }
    next += chunk;
  }

  table = CsvTable({"k", "survival", "bound", "std_error", "exceeding"});
  const auto n = static_cast<double>(kappa.size());
  json rows = json::array();
  bool within = true;
  for (unsigned k = 1; k <= c.max_k; ++k) {
    const auto exceed = static_cast<std::uint64_t>(
        std::count_if(kappa.begin(), kappa.end(), [k](std::uint64_t x) { return x > k; }));
    const double p = static_cast<double>(exceed) / n;
    const double se = std::sqrt(p * (1.0 - p) / n);
    const double bound = std::pow(2.0 / 3.0, (static_cast<double>(k) - 1.0) / 2.0);
    within = within && p <= bound + 3.0 * se;
    table.row().cell(static_cast<std::uint64_t>(k)).cell(p).cell(bound).cell(se).cell(exceed);
    rows.push_back({{"k", k}, {"survival", p}, {"bound", bound}, {"std_error", se}});
  }
  const double mean_kappa = std::accumulate(kappa.begin(), kappa.end(), 0.0) / n;
  return {{"episodes", kappa.size()},
          {"censored", censored},
          {"replicas_used", used},
          {"mean_kappa", mean_kappa},
          {"tail", rows},
          {"within_bound_plus_3se", within}};
}

}  // namespace

std::vector<PacketLocation> resolve_packets(const RunConfig& c, const LatticeDomain& lat) {
  std::vector<PacketLocation> out;
  if (c.mesoscopic) {
    for (std::size_t i = 0; i < c.mesoscopic->offsets.size(); ++i) {
      const Point p = mesoscopic_point(c.mesoscopic->x, c.scale, c.mesoscopic->theta, c.mesoscopic->offsets[i]);
      out.push_back(PacketLocation::at_site(lat.require_site(p, "mesoscopic.offsets[" + std::to_string(i) + "]")));
    }
    return out;
  }
  for (std::size_t i = 0; i < c.packets.size(); ++i) {
    const auto& p = c.packets[i];
    const std::string f = "packets[" + std::to_string(i) + "]";
    switch (p.kind) {
      case PacketSpec::Kind::Scaled:
        out.push_back(PacketLocation::at_site(lat.require_site(scaled_point(p.x, c.scale), f + ".at")));
        break;
      case PacketSpec::Kind::Site:
        out.push_back(PacketLocation::at_site(lat.require_site(p.point, f + ".site")));
        break;
      case PacketSpec::Kind::Carried:
        out.push_back(PacketLocation::carried_by(p.particle));
        break;
      case PacketSpec::Kind::Bath: {
        const auto b = lat.find_bath(p.point);
        if (b < 0) throw ConfigError(f + ".bath", format_point(p.point) + " is not a bath point");
        out.push_back(PacketLocation::at_bath(static_cast<std::size_t>(b)));
        break;
      }
    }
  }
  return out;
}

RunOutcome run_experiment(const RunConfig& c) {
  validate_config(c);
  const Setup s(c);
  CsvTable table({});
  json results;
  switch (c.kind) {
    case ExperimentKind::ForwardNess:
      results = run_forward_ness(c, s, table);
      break;
    case ExperimentKind::EquilibriumCheck:
      results = run_equilibrium(c, s, table);
      break;
    case ExperimentKind::Harmonic:
      results = run_harmonic(c, s, table);
      break;
    case ExperimentKind::DualHitting:
      results = run_dual_hitting(c, s, table);
      break;
    case ExperimentKind::DualityCheck:
      results = run_duality_check(c, s, table);
      break;
    case ExperimentKind::PoissonCheck:
      results = run_poisson(c, s, table);
      break;
    case ExperimentKind::ConditionalLte:
      results = run_conditional(c, s, table);
      break;
    case ExperimentKind::StickingTail:
      results = run_sticking(c, s, table);
      break;
  }

  RunOutcome out;
  out.csv_path = c.out_dir / (c.prefix + ".csv");
  out.summary_path = c.out_dir / (c.prefix + ".json");
  out.summary = {{"tool", "ltesim"},
                 {"version", tool_version()},
                 {"experiment", to_string(c.kind)},
                 {"config_hash", config_hash(c)},
                 {"seed", c.seed},
                 {"config", resolved_json(c)},
                 {"csv", out.csv_path.filename().string()},
                 {"results", results}};
  write_atomically(out.csv_path, table.str());
  write_atomically(out.summary_path, out.summary.dump(2) + "\n");
  return out;
}

}  // namespace ltesim
