#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ltesim/forward.hpp"

namespace ltesim {

/// Powers (n_1, ..., n_s) of a joint moment E[x_1^n_1 ... x_s^n_s].
using MultiIndex = std::vector<unsigned>;

struct MomentReport {
  std::vector<MultiIndex> orders;
  std::vector<double> empirical;
  std::vector<double> std_errors;
  std::vector<double> reference;  ///< filled by exponential_moment_distance
  double max_relative_deviation = 0.0;
  std::size_t samples = 0;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Splits a series into `batches` contiguous blocks of (near) equal size and
/// returns the block means.
std::vector<double> batch_means(std::span<const double> series, std::size_t batches);

/// Mean of the batch means with standard error sd/sqrt(#batches).
Estimate batch_means_estimate(std::span<const double> batch_values);

/// Mean with the i.i.d. standard error.
Estimate iid_estimate(std::span<const double> values);

/// Delete-one-batch jackknife for Σ num / Σ den over batches.
Estimate jackknife_ratio(std::span<const double> numerator, std::span<const double> denominator);

/// ∏ n_i! θ^{n_i}: joint moment of independent exponentials with mean θ.
double exponential_moment(const MultiIndex& order, double theta);

/// All multi-indices over `coordinates` coordinates with 1 <= total degree <= max_degree.
std::vector<MultiIndex> moment_orders(std::size_t coordinates, unsigned max_degree);

/// Empirical joint moments of the rows with batch-means standard errors.
/// Throws InsufficientSamples for fewer than 2 rows.
MomentReport empirical_moments(std::span<const std::vector<double>> samples, std::span<const MultiIndex> orders,
                               std::size_t batches = 30);

/// Per-site moments of orders 1..max_order from the streaming accumulator.
MomentReport site_moment_report(const SiteMomentAccumulator& acc, std::size_t site, int max_order);

/// Fills report.reference with ∏ n_i! θ^{n_i} and returns the largest
/// |empirical - reference| / reference.
double exponential_moment_distance(MomentReport& report, double theta);

struct CountReport {
  double alpha = 0.0;
  std::size_t cap = 0;  ///< last bucket collects every count >= cap
  std::vector<std::vector<double>> distribution;  ///< [site][count bucket]
  std::vector<double> total_variation;            ///< per site
  /// Pearson correlation for each pair (i < j) of sites, row-major over pairs.
  std::vector<double> correlations;
  std::size_t samples = 0;

  double max_total_variation() const;
  double max_abs_correlation() const;
};

/// Poisson(α) probabilities for buckets 0..cap-1 and the tail bucket {>= cap}.
std::vector<double> poisson_buckets(double alpha, std::size_t cap);

/// (1/2) Σ |p_k - q_k| against Poisson(α) with the tail lumped at `cap`.
/// `distribution` may be shorter or longer than cap+1; mass beyond cap is lumped.
double poisson_total_variation(std::span<const double> distribution, double alpha, std::size_t cap);

/// Count distributions per site compared to Poisson(α); `counts[s]` is the
/// sequence of particle counts observed at site s.
CountReport poisson_count_test(std::span<const std::vector<double>> counts, double alpha, std::size_t cap = 20);

/// Pearson correlation of two equally long series.
double correlation(std::span<const double> a, std::span<const double> b);

struct ConditionalOrders {
  unsigned site = 0;
  std::vector<unsigned> particles;  ///< one power per particle at the site; its size is K
};

/// E[ξ^{n0} · sym(ω^ñ) | exactly K particles at the site], where sym averages
/// the product over all orderings of the particles present. The standard error
/// is a jackknife over contiguous batches. Throws RareEvent when fewer than
/// `min_occurrences` records have exactly K particles.
MomentReport conditional_energy_moments(std::span<const SiteRecord> records, const ConditionalOrders& orders,
                                        std::size_t min_occurrences = 100, std::size_t batches = 30);

struct ChiSquare {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit of observed counts to expected counts.
ChiSquare chi_square_test(std::span<const double> observed, std::span<const double> expected);

}  // namespace ltesim
