// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ami/irr/metrics.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ami::irr {

struct IrrReport {
    std::string criterion;
    std::size_t raters = 0;
    std::size_t items = 0;
    double average = 0;
    std::optional<double> weighted_kappa; // empty when every rater pair was degenerate
    std::optional<double> icc_3_1;        // empty when the variance is degenerate
    double mad = 0;
    std::vector<std::string> notes;
};

struct CriterionMatrix {
    std::string criterion;
    RatingMatrix matrix;
};

/// Groups `criterion,rater,item,score` rows (header required) into one complete matrix per
/// criterion, criteria in order of first appearance, raters and items in order of first
/// appearance within the criterion. Errors carry the 1-based CSV line: parse_error for bad
/// rows, out_of_scale for scores outside 1..scale_max, missing_cell naming
/// criterion/rater/item for holes, invalid_argument for duplicates.
std::vector<CriterionMatrix> load_ratings(std::string_view csv_text, int scale_max = 5);

IrrReport evaluate(const CriterionMatrix& cm, KappaScheme scheme);

std::vector<IrrReport> evaluate_csv_text(std::string_view csv_text, KappaScheme scheme, int scale_max = 5);
std::vector<IrrReport> evaluate_csv(const std::filesystem::path& path, KappaScheme scheme, int scale_max = 5);

/// Aligned text table: Criterion | Avg | Weighted Kappa | ICC(3,1) | MAD, preceded by a header
/// line stating the kappa scheme and the MAD definition, followed by any notes.
std::string render_table(const std::vector<IrrReport>& reports, KappaScheme scheme);

nlohmann::json to_json(const IrrReport& report);
nlohmann::json reports_to_json(const std::vector<IrrReport>& reports, KappaScheme scheme);

} // namespace ami::irr
