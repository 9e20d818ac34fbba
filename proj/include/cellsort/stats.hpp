// stats.hpp: sample summaries and two-sample hypothesis tests.
#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/students_t.hpp>

namespace cellsort {

class StatsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class StdKind { Population, Sample };

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;
};

/// Mean and standard deviation; population form (divisor n) by default.
inline SampleSummary summarize(std::span<const double> samples, StdKind kind = StdKind::Population) {
  if (samples.empty()) throw StatsError("summarize: empty sample");
  if (kind == StdKind::Sample && samples.size() < 2)
    throw StatsError("summarize: sample std needs at least two values");
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double divisor = kind == StdKind::Population ? n : n - 1.0;
  return {samples.size(), mean, std::sqrt(ss / divisor)};
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  /// Welch-Satterthwaite degrees of freedom; NaN for the z-test.
  double dof = std::numeric_limits<double>::quiet_NaN();
  /// Both groups had zero spread and different means: the statistic is
  /// reported as +-infinity and p as 0.
  bool saturated = false;
};

namespace detail {
inline TestResult degenerate(double diff) {
  TestResult r;
  if (diff == 0.0) return r;
  r.statistic = diff > 0 ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
  r.p_value = 0.0;
  r.saturated = true;
  return r;
}
}  // namespace detail

/// Two-sample z-test on summaries: z = (mean_a - mean_b) / sqrt(sa^2/na + sb^2/nb),
/// two-tailed p from the standard normal.
inline TestResult z_test(const SampleSummary& a, const SampleSummary& b) {
  if (a.n == 0 || b.n == 0) throw StatsError("z_test: empty group");
  const double diff = a.mean - b.mean;
  const double se2 = a.std * a.std / static_cast<double>(a.n) + b.std * b.std / static_cast<double>(b.n);
  if (se2 == 0.0) return detail::degenerate(diff);
  TestResult r;
  r.statistic = diff / std::sqrt(se2);
  r.p_value = std::erfc(std::fabs(r.statistic) / std::sqrt(2.0));
  return r;
}

inline TestResult z_test(std::span<const double> a, std::span<const double> b) {
  return z_test(summarize(a), summarize(b));
}

/// Welch's unequal-variance t-test (sample variances), two-tailed.
inline TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw StatsError("welch_t_test: each group needs n >= 2");
  const auto sa = summarize(a, StdKind::Sample);
  const auto sb = summarize(b, StdKind::Sample);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = sa.std * sa.std / na;
  const double vb = sb.std * sb.std / nb;
  const double diff = sa.mean - sb.mean;
  if (va + vb == 0.0) return detail::degenerate(diff);

  TestResult r;
  r.statistic = diff / std::sqrt(va + vb);
  r.dof = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  const boost::math::students_t dist(r.dof);
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.statistic)));
  return r;
}

/// p-values below the smallest printable normal are shown as "<1e-300".
inline std::string format_p(double p) {
  if (p < 1e-300) return "<1e-300";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", p);
  return buf;
}

}  // namespace cellsort
