// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ami::irr {

enum class KappaScheme { linear, quadratic };

std::string scheme_name(KappaScheme scheme);

/// Raters x items ordinal scores on 1..scale_max. Complete by construction.
class RatingMatrix {
public:
    /// `scores[r]` holds rater r's score for every item. Throws Error(invalid_argument) for
    /// fewer than two raters, zero items, ragged rows or scale_max < 2, and
    /// Error(out_of_scale) for a score outside [1, scale_max].
    RatingMatrix(std::vector<std::vector<int>> scores, int scale_max = 5);
    RatingMatrix(std::vector<std::string> raters, std::vector<std::string> items,
                 std::vector<std::vector<int>> scores, int scale_max = 5);

    std::size_t rater_count() const noexcept { return scores_.size(); }
    std::size_t item_count() const noexcept { return scores_.front().size(); }
    int scale_max() const noexcept { return scale_max_; }
    int at(std::size_t rater, std::size_t item) const { return scores_[rater][item]; }
    std::span<const int> row(std::size_t rater) const { return scores_[rater]; }

    const std::vector<std::string>& raters() const noexcept { return raters_; }
    const std::vector<std::string>& items() const noexcept { return items_; }

private:
    std::vector<std::string> raters_;
    std::vector<std::string> items_;
    std::vector<std::vector<int>> scores_;
    int scale_max_;
};

/// Mean over all cells.
double criterion_average(const RatingMatrix& m);

/// Cohen-style weighted kappa for two raters: 1 - sum(w*o) / sum(w*e) with disagreement
/// weights |i-j|/(k-1) or (i-j)^2/(k-1)^2 and e the product of the two raters' own marginals.
/// When sum(w*e) = 0 (both raters constant on the same category) the result is 1.0 for
/// identical vectors; anything else there throws Error(undefined_result).
double weighted_kappa_pair(std::span<const int> a, std::span<const int> b, KappaScheme scheme, int scale_max = 5);

struct KappaSummary {
    std::optional<double> value; // mean over defined pairs
    std::vector<std::pair<std::size_t, std::size_t>> undefined_pairs;
};

KappaSummary weighted_kappa_summary(const RatingMatrix& m, KappaScheme scheme);

/// Unweighted mean of the pairwise kappas over all rater pairs; undefined pairs are skipped.
/// Throws Error(undefined_result) when every pair is undefined.
double weighted_kappa(const RatingMatrix& m, KappaScheme scheme);

/// Shrout-Fleiss ICC(3,1): (BMS - EMS) / (BMS + (r-1) EMS) from the items x raters two-way
/// decomposition without replication. Needs at least two items; throws Error(undefined_result)
/// when the denominator is zero.
double icc_3_1(const RatingMatrix& m);

/// Mean of |a - b| over every item and unordered rater pair.
double mean_absolute_difference(const RatingMatrix& m);

} // namespace ami::irr
