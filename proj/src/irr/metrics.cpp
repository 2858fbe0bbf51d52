// SPDX-License-Identifier: Apache-2.0
#include "ami/irr/metrics.hpp"

#include "ami/common/error.hpp"

#include <cmath>
#include <cstdlib>

namespace ami::irr {

std::string scheme_name(KappaScheme scheme)
{
    return scheme == KappaScheme::linear ? "linear" : "quadratic";
}

RatingMatrix::RatingMatrix(std::vector<std::vector<int>> scores, int scale_max)
    : RatingMatrix({}, {}, std::move(scores), scale_max)
{
}

RatingMatrix::RatingMatrix(std::vector<std::string> raters, std::vector<std::string> items,
                           std::vector<std::vector<int>> scores, int scale_max)
    : raters_(std::move(raters)), items_(std::move(items)), scores_(std::move(scores)), scale_max_(scale_max)
{
    if (scale_max_ < 2)
        throw Error(Errc::invalid_argument, "scale_max must be >= 2");
    if (scores_.size() < 2)
        throw Error(Errc::invalid_argument, "need at least two raters");
    if (scores_.front().empty())
        throw Error(Errc::invalid_argument, "need at least one item");
    const auto n = scores_.front().size();
    for (std::size_t r = 0; r < scores_.size(); ++r) {
        if (scores_[r].size() != n)
            throw Error(Errc::invalid_argument, "rater " + std::to_string(r) + " has a different item count");
        for (std::size_t i = 0; i < n; ++i)
            if (scores_[r][i] < 1 || scores_[r][i] > scale_max_)
                throw Error(Errc::out_of_scale, "score " + std::to_string(scores_[r][i]) + " outside 1.."
                                                    + std::to_string(scale_max_));
    }
    if (raters_.empty())
        for (std::size_t r = 0; r < scores_.size(); ++r)
            raters_.push_back("r" + std::to_string(r + 1));
    if (items_.empty())
        for (std::size_t i = 0; i < n; ++i)
            items_.push_back("i" + std::to_string(i + 1));
    if (raters_.size() != scores_.size() || items_.size() != n)
        throw Error(Errc::invalid_argument, "label counts do not match the score matrix");
}

double criterion_average(const RatingMatrix& m)
{
    long long sum = 0;
    for (std::size_t r = 0; r < m.rater_count(); ++r)
        for (int v : m.row(r))
            sum += v;
    return static_cast<double>(sum) / static_cast<double>(m.rater_count() * m.item_count());
}

double weighted_kappa_pair(std::span<const int> a, std::span<const int> b, KappaScheme scheme, int scale_max)
{
    if (a.size() != b.size() || a.empty())
        throw Error(Errc::invalid_argument, "rating vectors must be non-empty and of equal length");
    if (scale_max < 2)
        throw Error(Errc::invalid_argument, "scale_max must be >= 2");
    const auto k = static_cast<std::size_t>(scale_max);

    // Joint counts and marginal counts; proportions are counts / n.
    std::vector<double> joint(k * k, 0.0);
    std::vector<double> row(k, 0.0), col(k, 0.0);
    for (std::size_t t = 0; t < a.size(); ++t) {
        if (a[t] < 1 || a[t] > scale_max || b[t] < 1 || b[t] > scale_max)
            throw Error(Errc::out_of_scale, "rating outside 1.." + std::to_string(scale_max));
        const auto i = static_cast<std::size_t>(a[t] - 1);
        const auto j = static_cast<std::size_t>(b[t] - 1);
        joint[i * k + j] += 1;
        row[i] += 1;
        col[j] += 1;
    }

    const double n = static_cast<double>(a.size());
    const double span = static_cast<double>(k - 1);
    double observed = 0, expected = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double d = std::fabs(static_cast<double>(i) - static_cast<double>(j)) / span;
            const double w = scheme == KappaScheme::linear ? d : d * d;
            observed += w * joint[i * k + j] / n;
            expected += w * (row[i] / n) * (col[j] / n);
        }
    }

    if (expected == 0.0) {
        for (std::size_t t = 0; t < a.size(); ++t)
            if (a[t] != b[t])
                throw Error(Errc::undefined_result, "weighted kappa undefined: degenerate marginals");
        return 1.0;
    }
    return 1.0 - observed / expected;
}

KappaSummary weighted_kappa_summary(const RatingMatrix& m, KappaScheme scheme)
{
    KappaSummary summary;
    double sum = 0;
    std::size_t defined = 0;
    for (std::size_t p = 0; p < m.rater_count(); ++p) {
        for (std::size_t q = p + 1; q < m.rater_count(); ++q) {
            try {
                sum += weighted_kappa_pair(m.row(p), m.row(q), scheme, m.scale_max());
                ++defined;
            } catch (const Error& e) {
                if (e.code() != Errc::undefined_result)
                    throw;
                summary.undefined_pairs.emplace_back(p, q);
            }
        }
    }
    if (defined > 0)
        summary.value = sum / static_cast<double>(defined);
    return summary;
}

double weighted_kappa(const RatingMatrix& m, KappaScheme scheme)
{
    const auto summary = weighted_kappa_summary(m, scheme);
    if (!summary.value)
        throw Error(Errc::undefined_result, "weighted kappa undefined for every rater pair");
    return *summary.value;
}

double icc_3_1(const RatingMatrix& m)
{
    const auto r = m.rater_count();
    const auto n = m.item_count();
    if (n < 2)
        throw Error(Errc::invalid_argument, "ICC(3,1) needs at least two items");

    std::vector<double> item_mean(n, 0.0), rater_mean(r, 0.0);
    double grand = 0;
    for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = m.at(k, i);
            item_mean[i] += v;
            rater_mean[k] += v;
            grand += v;
        }
    }
    for (auto& v : item_mean)
        v /= static_cast<double>(r);
    for (auto& v : rater_mean)
        v /= static_cast<double>(n);
    grand /= static_cast<double>(r * n);

    double ss_items = 0;
    for (double mu : item_mean)
        ss_items += (mu - grand) * (mu - grand);
    ss_items *= static_cast<double>(r);

    // Residuals of the additive model, summed directly.
    double ss_error = 0;
    for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double e = m.at(k, i) - item_mean[i] - rater_mean[k] + grand;
            ss_error += e * e;
        }
    }

    const double bms = ss_items / static_cast<double>(n - 1);
    const double ems = ss_error / static_cast<double>((n - 1) * (r - 1));
    const double denom = bms + static_cast<double>(r - 1) * ems;
    if (denom == 0.0)
        throw Error(Errc::undefined_result, "ICC(3,1) undefined: no variance between items or in residuals");
    return (bms - ems) / denom;
}

double mean_absolute_difference(const RatingMatrix& m)
{
    long long total = 0;
    long long terms = 0;
    for (std::size_t i = 0; i < m.item_count(); ++i) {
        for (std::size_t p = 0; p < m.rater_count(); ++p) {
            for (std::size_t q = p + 1; q < m.rater_count(); ++q) {
                total += std::abs(m.at(p, i) - m.at(q, i));
                ++terms;
            }
        }
    }
    return static_cast<double>(total) / static_cast<double>(terms);
}

} // namespace ami::irr
