#include "ltesim/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "ltesim/error.hpp"

namespace ltesim {

std::vector<double> batch_means(std::span<const double> series, std::size_t batches) {
  const std::size_t n = series.size();
  batches = std::min(std::max<std::size_t>(batches, 1), std::max<std::size_t>(n, 1));
  std::vector<double> out;
  out.reserve(batches);
  for (std::size_t b = 0; b < batches && n > 0; ++b) {
    const std::size_t lo = b * n / batches;
    const std::size_t hi = (b + 1) * n / batches;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += series[i];
    out.push_back(s / static_cast<double>(hi - lo));
  }
  return out;
}

Estimate iid_estimate(std::span<const double> values) {
  Estimate e;
  const auto n = static_cast<double>(values.size());
  if (values.empty()) return e;
  e.value = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return e;
  double ss = 0.0;
  for (double x : values) ss += (x - e.value) * (x - e.value);
  e.std_error = std::sqrt(ss / (n - 1.0) / n);
  return e;
}

Estimate batch_means_estimate(std::span<const double> batch_values) { return iid_estimate(batch_values); }

Estimate jackknife_ratio(std::span<const double> numerator, std::span<const double> denominator) {
  Estimate e;
  const std::size_t n = numerator.size();
  const double num = std::accumulate(numerator.begin(), numerator.end(), 0.0);
  const double den = std::accumulate(denominator.begin(), denominator.end(), 0.0);
  e.value = den != 0.0 ? num / den : 0.0;
  if (n < 2) return e;
  std::vector<double> leave_out;
  leave_out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = den - denominator[i];
    if (d != 0.0) leave_out.push_back((num - numerator[i]) / d);
  }
  if (leave_out.size() < 2) return e;
  const double m = std::accumulate(leave_out.begin(), leave_out.end(), 0.0) / static_cast<double>(leave_out.size());
  double ss = 0.0;
  for (double r : leave_out) ss += (r - m) * (r - m);
  const auto k = static_cast<double>(leave_out.size());
  e.std_error = std::sqrt((k - 1.0) / k * ss);
  return e;
}

double exponential_moment(const MultiIndex& order, double theta) {
  double m = 1.0;
  for (unsigned n : order) m *= std::tgamma(static_cast<double>(n) + 1.0) * std::pow(theta, static_cast<double>(n));
  return m;
}

std::vector<MultiIndex> moment_orders(std::size_t coordinates, unsigned max_degree) {
  std::vector<MultiIndex> out;
  MultiIndex idx(coordinates, 0);
  // Odometer over {0..max_degree}^coordinates keeping total degree in range.
  while (true) {
    const unsigned total = std::accumulate(idx.begin(), idx.end(), 0u);
    if (total >= 1 && total <= max_degree) out.push_back(idx);
    std::size_t a = 0;
    while (a < coordinates && ++idx[a] > max_degree) idx[a++] = 0;
    if (a == coordinates) break;
  }
  std::stable_sort(out.begin(), out.end(), [](const MultiIndex& x, const MultiIndex& y) {
    return std::accumulate(x.begin(), x.end(), 0u) < std::accumulate(y.begin(), y.end(), 0u);
  });
  return out;
}

MomentReport empirical_moments(std::span<const std::vector<double>> samples, std::span<const MultiIndex> orders,
                               std::size_t batches) {
  if (samples.size() < 2) {
    throw Error(ErrorKind::InsufficientSamples,
                "moments need at least 2 samples, got " + std::to_string(samples.size()));
  }
  if (orders.empty()) throw ConfigError("orders", "no moment orders requested");
  MomentReport r;
  r.samples = samples.size();
  std::vector<double> values(samples.size());
  for (const auto& order : orders) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (order.size() > samples[i].size()) throw ConfigError("orders", "order longer than the sample vector");
      double prod = 1.0;
      for (std::size_t c = 0; c < order.size(); ++c) {
        for (unsigned k = 0; k < order[c]; ++k) prod *= samples[i][c];
      }
      values[i] = prod;
    }
    const auto bm = batch_means(values, batches);
    r.orders.push_back(order);
    r.empirical.push_back(std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size()));
    r.std_errors.push_back(batch_means_estimate(bm).std_error);
  }
  return r;
}

MomentReport site_moment_report(const SiteMomentAccumulator& acc, std::size_t site, int max_order) {
  if (acc.records() < 2) {
    throw Error(ErrorKind::InsufficientSamples, "site moments need at least 2 records");
  }
  if (max_order > acc.max_power()) throw ConfigError("orders", "accumulator does not track that power");
  MomentReport r;
  r.samples = static_cast<std::size_t>(acc.records());
  for (int k = 1; k <= max_order; ++k) {
    r.orders.push_back({static_cast<unsigned>(k)});
    r.empirical.push_back(acc.mean(site, k));
    r.std_errors.push_back(batch_means_estimate(acc.batch_means(site, k)).std_error);
  }
  return r;
}

double exponential_moment_distance(MomentReport& report, double theta) {
  report.reference.clear();
  double worst = 0.0;
  for (std::size_t i = 0; i < report.orders.size(); ++i) {
    const double ref = exponential_moment(report.orders[i], theta);
    report.reference.push_back(ref);
    worst = std::max(worst, std::abs(report.empirical[i] - ref) / ref);
  }
  report.max_relative_deviation = worst;
  return worst;
}

double CountReport::max_total_variation() const {
  return total_variation.empty() ? 0.0 : *std::max_element(total_variation.begin(), total_variation.end());
}

double CountReport::max_abs_correlation() const {
  double m = 0.0;
  for (double c : correlations) m = std::max(m, std::abs(c));
  return m;
}

std::vector<double> poisson_buckets(double alpha, std::size_t cap) {
  std::vector<double> q(cap + 1, 0.0);
  double term = std::exp(-alpha);
  double mass = 0.0;
  for (std::size_t k = 0; k < cap; ++k) {
    q[k] = term;
    mass += term;
    term *= alpha / static_cast<double>(k + 1);
  }
  q[cap] = std::max(0.0, 1.0 - mass);
  return q;
}

double poisson_total_variation(std::span<const double> distribution, double alpha, std::size_t cap) {
  const auto q = poisson_buckets(alpha, cap);
  std::vector<double> p(cap + 1, 0.0);
  for (std::size_t k = 0; k < distribution.size(); ++k) p[std::min(k, cap)] += distribution[k];
  double tv = 0.0;
  for (std::size_t k = 0; k <= cap; ++k) tv += std::abs(p[k] - q[k]);
  return 0.5 * tv;
}

double correlation(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n < 2) return 0.0;
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

CountReport poisson_count_test(std::span<const std::vector<double>> counts, double alpha, std::size_t cap) {
  if (!(alpha > 0.0)) throw ConfigError("alpha", "must be positive");
  CountReport r;
  r.alpha = alpha;
  r.cap = cap;
  r.samples = counts.empty() ? 0 : counts.front().size();
  for (const auto& series : counts) {
    std::vector<double> dist(cap + 1, 0.0);
    for (double c : series) {
      const auto k = static_cast<std::size_t>(std::max(0.0, std::round(c)));
      dist[std::min(k, cap)] += 1.0;
    }
    for (double& p : dist) p /= static_cast<double>(std::max<std::size_t>(series.size(), 1));
    r.total_variation.push_back(poisson_total_variation(dist, alpha, cap));
    r.distribution.push_back(std::move(dist));
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t j = i + 1; j < counts.size(); ++j) r.correlations.push_back(correlation(counts[i], counts[j]));
  }
  return r;
}

namespace {

double symmetrized_product(std::span<const double> energies, std::span<const unsigned> powers) {
  std::vector<std::size_t> perm(energies.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double total = 0.0;
  std::size_t count = 0;
  do {
    double prod = 1.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      for (unsigned k = 0; k < powers[i]; ++k) prod *= energies[perm[i]];
    }
    total += prod;
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / static_cast<double>(count);
}

}  // namespace

MomentReport conditional_energy_moments(std::span<const SiteRecord> records, const ConditionalOrders& orders,
                                        std::size_t min_occurrences, std::size_t batches) {
  const std::size_t k = orders.particles.size();
  const std::size_t n = records.size();
  batches = std::min(std::max<std::size_t>(batches, 1), std::max<std::size_t>(n, 1));
  std::vector<double> num(batches, 0.0);
  std::vector<double> den(batches, 0.0);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = records[i];
    if (rec.particle_energies.size() != k) continue;
    const std::size_t b = i * batches / n;
    double f = std::pow(rec.site_energy, static_cast<double>(orders.site));
    if (k > 0) f *= symmetrized_product(rec.particle_energies, orders.particles);
    num[b] += f;
    den[b] += 1.0;
    ++hits;
  }
  if (hits < min_occurrences) {
    throw Error(ErrorKind::RareEvent, "only " + std::to_string(hits) + " records with exactly " +
                                          std::to_string(k) + " particles at the site (need " +
                                          std::to_string(min_occurrences) + ")");
  }
  MomentReport r;
  MultiIndex order{orders.site};
  order.insert(order.end(), orders.particles.begin(), orders.particles.end());
  r.orders.push_back(order);
  const Estimate e = jackknife_ratio(num, den);
  r.empirical.push_back(e.value);
  r.std_errors.push_back(e.std_error);
  r.samples = hits;
  return r;
}

ChiSquare chi_square_test(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size()) throw ConfigError("expected", "size mismatch");
  ChiSquare c;
  std::size_t bins = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) {
      if (observed[i] > 0.0) {
        c.statistic = std::numeric_limits<double>::infinity();
        c.p_value = 0.0;
        return c;
      }
      continue;
    }
    const double d = observed[i] - expected[i];
    c.statistic += d * d / expected[i];
    ++bins;
  }
  c.dof = bins > 0 ? bins - 1 : 0;
  c.p_value = c.dof == 0 ? 1.0 : boost::math::gamma_q(0.5 * static_cast<double>(c.dof), 0.5 * c.statistic);
  return c;
}

}  // namespace ltesim
