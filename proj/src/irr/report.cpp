// SPDX-License-Identifier: Apache-2.0
#include "ami/irr/report.hpp"

#include "ami/common/csv.hpp"
#include "ami/common/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace ami::irr {

namespace {

std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::string at_line(std::size_t line, const std::string& msg)
{
    return "line " + std::to_string(line) + ": " + msg;
}

struct Draft {
    std::string criterion;
    std::vector<std::string> raters;
    std::vector<std::string> items;
    std::map<std::pair<std::size_t, std::size_t>, int> cells;
};

std::size_t index_of(std::vector<std::string>& labels, const std::string& label)
{
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it != labels.end())
        return static_cast<std::size_t>(it - labels.begin());
    labels.push_back(label);
    return labels.size() - 1;
}

std::string fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos)
        s.erase(0, 1);
    return s;
}

} // namespace

std::vector<CriterionMatrix> load_ratings(std::string_view csv_text, int scale_max)
{
    const auto records = csv::parse(csv_text);
    if (records.empty())
        throw Error(Errc::parse_error, "line 1: empty file, expected header criterion,rater,item,score");

    const auto& header = records.front();
    std::vector<std::string> names;
    for (const auto& f : header.fields)
        names.push_back(trim(f));
    if (names != std::vector<std::string>{"criterion", "rater", "item", "score"})
        throw Error(Errc::parse_error, at_line(header.line, "expected header criterion,rater,item,score"));

    std::vector<Draft> drafts;
    for (std::size_t k = 1; k < records.size(); ++k) {
        const auto& rec = records[k];
        if (rec.fields.size() != 4)
            throw Error(Errc::parse_error, at_line(rec.line, "expected 4 fields, got " + std::to_string(rec.fields.size())));
        const auto criterion = trim(rec.fields[0]);
        const auto rater = trim(rec.fields[1]);
        const auto item = trim(rec.fields[2]);
        const auto score_text = trim(rec.fields[3]);
        if (criterion.empty() || rater.empty() || item.empty())
            throw Error(Errc::parse_error, at_line(rec.line, "criterion, rater and item must be non-empty"));

        int score = 0;
        const auto* end = score_text.data() + score_text.size();
        const auto [ptr, ec] = std::from_chars(score_text.data(), end, score);
        if (score_text.empty() || ec != std::errc{} || ptr != end)
            throw Error(Errc::parse_error, at_line(rec.line, "score '" + score_text + "' is not an integer"));
        if (score < 1 || score > scale_max)
            throw Error(Errc::out_of_scale, at_line(rec.line, "score " + std::to_string(score) + " outside 1.."
                                                                  + std::to_string(scale_max)));

        auto it = std::find_if(drafts.begin(), drafts.end(), [&](const Draft& d) { return d.criterion == criterion; });
        if (it == drafts.end()) {
            drafts.push_back(Draft{criterion, {}, {}, {}});
            it = drafts.end() - 1;
        }
        const auto r = index_of(it->raters, rater);
        const auto i = index_of(it->items, item);
        if (!it->cells.emplace(std::pair{r, i}, score).second)
            throw Error(Errc::invalid_argument, at_line(rec.line, "duplicate score for criterion '" + criterion
                                                                      + "', rater '" + rater + "', item '" + item + "'"));
    }
    if (drafts.empty())
        throw Error(Errc::parse_error, "no rating rows after the header");

    std::vector<CriterionMatrix> out;
    for (auto& d : drafts) {
        std::vector<std::vector<int>> scores(d.raters.size(), std::vector<int>(d.items.size(), 0));
        for (std::size_t r = 0; r < d.raters.size(); ++r) {
            for (std::size_t i = 0; i < d.items.size(); ++i) {
                const auto cell = d.cells.find({r, i});
                if (cell == d.cells.end())
                    throw Error(Errc::missing_cell, "missing score for criterion '" + d.criterion + "', rater '"
                                                        + d.raters[r] + "', item '" + d.items[i] + "'");
                scores[r][i] = cell->second;
            }
        }
        if (d.raters.size() < 2)
            throw Error(Errc::invalid_argument, "criterion '" + d.criterion + "' needs at least two raters");
        out.push_back(CriterionMatrix{d.criterion, RatingMatrix(d.raters, d.items, std::move(scores), scale_max)});
    }
    return out;
}

IrrReport evaluate(const CriterionMatrix& cm, KappaScheme scheme)
{
    const auto& m = cm.matrix;
    IrrReport rep;
    rep.criterion = cm.criterion;
    rep.raters = m.rater_count();
    rep.items = m.item_count();
    rep.average = criterion_average(m);
    rep.mad = mean_absolute_difference(m);

    const auto kappa = weighted_kappa_summary(m, scheme);
    rep.weighted_kappa = kappa.value;
    for (const auto& [p, q] : kappa.undefined_pairs)
        rep.notes.push_back("kappa undefined for raters " + m.raters()[p] + "/" + m.raters()[q] + ", excluded");
    if (!kappa.value)
        rep.notes.push_back("kappa undefined for every rater pair");

    if (m.item_count() < 2) {
        rep.notes.push_back("ICC(3,1) needs at least two items");
    } else {
        try {
            rep.icc_3_1 = icc_3_1(m);
        } catch (const Error& e) {
            if (e.code() != Errc::undefined_result)
                throw;
            rep.notes.push_back("ICC(3,1) undefined: zero variance");
        }
    }
    return rep;
}

std::vector<IrrReport> evaluate_csv_text(std::string_view csv_text, KappaScheme scheme, int scale_max)
{
    std::vector<IrrReport> out;
    for (const auto& cm : load_ratings(csv_text, scale_max))
        out.push_back(evaluate(cm, scheme));
    return out;
}

std::vector<IrrReport> evaluate_csv(const std::filesystem::path& path, KappaScheme scheme, int scale_max)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::invalid_argument, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return evaluate_csv_text(ss.str(), scheme, scale_max);
}

std::string render_table(const std::vector<IrrReport>& reports, KappaScheme scheme)
{
    const std::vector<std::string> head{"Criterion", "Avg", "Weighted Kappa", "ICC(3,1)", "MAD"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports) {
        rows.push_back({r.criterion, fixed(r.average, 2), r.weighted_kappa ? fixed(*r.weighted_kappa, 3) : "n/a",
                        r.icc_3_1 ? fixed(*r.icc_3_1, 3) : "n/a", fixed(r.mad, 3)});
    }
    std::vector<std::size_t> width(head.size());
    for (std::size_t c = 0; c < head.size(); ++c) {
        width[c] = head[c].size();
        for (const auto& row : rows)
            width[c] = std::max(width[c], row[c].size());
    }

    std::ostringstream out;
    out << "kappa: " << scheme_name(scheme) << " weights, mean over rater pairs; MAD: mean absolute pairwise difference\n";
    auto emit = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto pad = std::string(width[c] - cells[c].size(), ' ');
            if (c > 0)
                line += "  ";
            line += c == 0 ? cells[c] + pad : pad + cells[c];
        }
        out << line << '\n';
    };
    emit(head);
    std::string rule;
    for (std::size_t c = 0; c < width.size(); ++c)
        rule += (c > 0 ? "  " : "") + std::string(width[c], '-');
    out << rule << '\n';
    for (const auto& row : rows)
        emit(row);
    for (const auto& r : reports)
        for (const auto& n : r.notes)
            out << "note (" << r.criterion << "): " << n << '\n';
    return out.str();
}

nlohmann::json to_json(const IrrReport& report)
{
    nlohmann::json j{{"criterion", report.criterion}, {"raters", report.raters}, {"items", report.items},
                     {"average", report.average},     {"mad", report.mad},       {"notes", report.notes}};
    j["weighted_kappa"] = report.weighted_kappa ? nlohmann::json(*report.weighted_kappa) : nlohmann::json(nullptr);
    j["icc_3_1"] = report.icc_3_1 ? nlohmann::json(*report.icc_3_1) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json reports_to_json(const std::vector<IrrReport>& reports, KappaScheme scheme)
{
    auto arr = nlohmann::json::array();
    for (const auto& r : reports)
        arr.push_back(to_json(r));
    return {{"kappa_scheme", scheme_name(scheme)}, {"mad_definition", "mean absolute pairwise difference"},
            {"reports", arr}};
}

} // namespace ami::irr
