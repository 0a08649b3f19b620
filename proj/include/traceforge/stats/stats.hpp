#pragma once

#include <traceforge/error.hpp>
#include <traceforge/stats/distributions.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace traceforge::stats {

/// Summary columns: N, mean, SE, CI-L, CI-U, median, SD, variance, IQR.
/// SE, SD, variance and the CI are absent for a single observation.
struct DescriptiveStats {
    std::size_t n{0};
    double mean{0.0};
    std::optional<double> se;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    double median{0.0};
    std::optional<double> sd;
    std::optional<double> variance;
    double iqr{0.0};
};

enum class Alternative : std::uint8_t { two_sided, greater, less };

constexpr auto to_string_view(Alternative alt) noexcept -> std::string_view {
    switch (alt) {
        case Alternative::two_sided: return "two_sided";
        case Alternative::greater:   return "greater";
        case Alternative::less:      return "less";
    }
    return "two_sided";
}

struct TestResult {
    std::string test;
    double statistic{0.0};
    double df{0.0};
    std::optional<double> df2;  ///< Denominator df for F tests.
    double p_value{1.0};
    Alternative alternative{Alternative::two_sided};
};

/// Linear-interpolation quantile (Hyndman-Fan type 7) of already sorted data.
inline auto quantile_sorted(std::span<const double> sorted, double p) -> double {
    if (sorted.empty()) throw Error(Errc::empty_sample, "quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline auto mean_of(std::span<const double> xs) -> double {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

/// Unbiased sample variance (two-pass).
inline auto variance_of(std::span<const double> xs, double mean) -> double {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

inline auto describe(std::span<const double> samples, double confidence = 0.95) -> DescriptiveStats {
    if (samples.empty()) throw Error(Errc::empty_sample, "describe needs at least one observation");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    DescriptiveStats out;
    out.n = samples.size();
    out.mean = mean_of(samples);
    out.median = quantile_sorted(sorted, 0.5);
    out.iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    if (out.n >= 2) {
        const double var = variance_of(samples, out.mean);
        const double sd = std::sqrt(var);
        const double se = sd / std::sqrt(static_cast<double>(out.n));
        const double t = student_t_quantile((1.0 + confidence) / 2.0, static_cast<double>(out.n - 1));
        out.variance = var;
        out.sd = sd;
        out.se = se;
        out.ci_low = out.mean - t * se;
        out.ci_high = out.mean + t * se;
    }
    return out;
}

namespace detail {

inline auto t_p_value(double t, double df, Alternative alt) -> double {
    switch (alt) {
        case Alternative::greater: return student_t_sf(t, df);
        case Alternative::less:    return student_t_cdf(t, df);
        case Alternative::two_sided: break;
    }
    if (std::isnan(t)) return 1.0;
    return std::min(1.0, 2.0 * student_t_sf(std::abs(t), df));
}

inline void require_sample(std::span<const double> xs, const char* what) {
    if (xs.empty()) throw Error(Errc::empty_sample, std::string(what) + " is empty");
    if (xs.size() < 2) throw Error(Errc::degenerate_sample, std::string(what) + " needs at least two observations");
}

}  // namespace detail

inline auto one_sample_t_test(std::span<const double> samples, double mu0,
                              Alternative alternative = Alternative::two_sided) -> TestResult {
    detail::require_sample(samples, "sample");
    const double n = static_cast<double>(samples.size());
    const double mean = mean_of(samples);
    const double sd = std::sqrt(variance_of(samples, mean));
    if (!(sd > 0.0)) throw Error(Errc::degenerate_sample, "sample has zero variance");
    const double t = (mean - mu0) / (sd / std::sqrt(n));
    const double df = n - 1.0;
    return {"one_sample_t", t, df, std::nullopt, detail::t_p_value(t, df, alternative), alternative};
}

/// Welch's unequal-variance t test with Welch-Satterthwaite degrees of freedom.
/// When both groups have zero variance the statistic is taken in the limit: t = 0 and
/// p = 1 for equal means, t = ±inf for unequal means.
inline auto welch_t_test(std::span<const double> a, std::span<const double> b,
                         Alternative alternative = Alternative::two_sided) -> TestResult {
    detail::require_sample(a, "first sample");
    detail::require_sample(b, "second sample");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double ma = mean_of(a), mb = mean_of(b);
    const double ra = variance_of(a, ma) / na, rb = variance_of(b, mb) / nb;
    const double diff = ma - mb;
    if (ra + rb == 0.0) {
        const double df = na + nb - 2.0;
        if (diff == 0.0) return {"welch_t", 0.0, df, std::nullopt, 1.0, alternative};
        const double t = diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
        return {"welch_t", t, df, std::nullopt, detail::t_p_value(t, df, alternative), alternative};
    }
    const double t = diff / std::sqrt(ra + rb);
    const double df = (ra + rb) * (ra + rb) / (ra * ra / (na - 1.0) + rb * rb / (nb - 1.0));
    return {"welch_t", t, df, std::nullopt, detail::t_p_value(t, df, alternative), alternative};
}

/// Welch's heteroscedastic one-way ANOVA.
template <typename Groups>
auto welch_anova(const Groups& groups) -> TestResult {
    const std::size_t k = std::size(groups);
    if (k < 2) throw Error(Errc::too_few_groups, "welch_anova needs at least two groups");
    std::vector<double> weights, means, sizes;
    for (const auto& group : groups) {
        std::span<const double> xs(std::data(group), std::size(group));
        detail::require_sample(xs, "group");
        const double m = mean_of(xs);
        const double var = variance_of(xs, m);
        if (!(var > 0.0)) throw Error(Errc::degenerate_sample, "group has zero variance");
        sizes.push_back(static_cast<double>(xs.size()));
        means.push_back(m);
        weights.push_back(static_cast<double>(xs.size()) / var);
    }
    double w_sum = 0.0, weighted = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        w_sum += weights[i];
        weighted += weights[i] * means[i];
    }
    const double grand = weighted / w_sum;
    double between = 0.0, lambda = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        between += weights[i] * (means[i] - grand) * (means[i] - grand);
        const double share = 1.0 - weights[i] / w_sum;
        lambda += share * share / (sizes[i] - 1.0);
    }
    const double kk = static_cast<double>(k);
    const double numerator = between / (kk - 1.0);
    const double denominator = 1.0 + 2.0 * (kk - 2.0) / (kk * kk - 1.0) * lambda;
    const double f = numerator / denominator;
    const double df1 = kk - 1.0;
    const double df2 = (kk * kk - 1.0) / (3.0 * lambda);
    return {"welch_anova", f, df1, df2, fisher_f_sf(f, df1, df2), Alternative::two_sided};
}

inline void to_json(nlohmann::json& j, const DescriptiveStats& s) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    j = nlohmann::json{{"N", s.n},           {"mean", s.mean},          {"SE", opt(s.se)},
                       {"CI-L", opt(s.ci_low)}, {"CI-U", opt(s.ci_high)}, {"median", s.median},
                       {"SD", opt(s.sd)},    {"variance", opt(s.variance)}, {"IQR", s.iqr}};
}

/// Row form {test, statistic, df, p, alternative}; F tests also carry df2.
inline void to_json(nlohmann::json& j, const TestResult& r) {
    j = nlohmann::json{{"test", r.test},
                       {"statistic", r.statistic},
                       {"df", r.df},
                       {"p", r.p_value},
                       {"alternative", to_string_view(r.alternative)}};
    if (r.df2) j["df2"] = *r.df2;
}

}  // namespace traceforge::stats
