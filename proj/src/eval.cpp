#include "eigenexpr/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace eigenexpr {

namespace {

std::string fmt_rate(double v, int decimals) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), decimals == 1 ? "%.1f" : "%.2f", v);
    return buf;
}

void fill_rates(LabelRow& row) {
    row.true_rate = rate(row.true_classify, row.tested);
    row.false_rate = rate(row.false_classify, row.tested);
}

constexpr const char* kColumns[7] = {"total image",   "feeling",
                                     "tested image",  "true classify",
                                     "false classify", "true rate %",
                                     "false rate %"};

std::vector<std::array<std::string, 7>> table_cells(
    const std::vector<LabelRow>& rows, const LabelRow& total,
    const char* total_title, int decimals) {
    std::vector<std::array<std::string, 7>> cells;
    for (const LabelRow& r : rows)
        cells.push_back({std::to_string(r.total_images), r.label,
                         std::to_string(r.tested), std::to_string(r.true_classify),
                         std::to_string(r.false_classify),
                         fmt_rate(r.true_rate, decimals),
                         fmt_rate(r.false_rate, decimals)});
    cells.push_back({total_title, "", std::to_string(total.tested),
                     std::to_string(total.true_classify),
                     std::to_string(total.false_classify),
                     fmt_rate(total.true_rate, decimals),
                     fmt_rate(total.false_rate, decimals)});
    return cells;
}

std::string render_text(const std::vector<std::array<std::string, 7>>& cells,
                        const std::array<std::string, 7>& header) {
    std::array<std::size_t, 7> width{};
    for (std::size_t c = 0; c < 7; ++c) width[c] = header[c].size();
    for (const auto& row : cells)
        for (std::size_t c = 0; c < 7; ++c)
            width[c] = std::max(width[c], row[c].size());

    std::string out;
    auto emit = [&](const std::array<std::string, 7>& row) {
        for (std::size_t c = 0; c < 7; ++c) {
            if (c) out += "  ";
            out += row[c];
            if (c + 1 < 7) out.append(width[c] - row[c].size(), ' ');
        }
        out += '\n';
    };
    emit(header);
    for (const auto& row : cells) emit(row);
    return out;
}

std::string render_csv(const std::vector<std::array<std::string, 7>>& cells,
                       const std::array<std::string, 7>& header) {
    std::string out;
    auto emit = [&](const std::array<std::string, 7>& row) {
        for (std::size_t c = 0; c < 7; ++c) {
            if (c) out += ',';
            out += row[c];
        }
        out += '\n';
    };
    emit(header);
    for (const auto& row : cells) emit(row);
    return out;
}

nlohmann::ordered_json row_json(const LabelRow& r, const char* label_key) {
    nlohmann::ordered_json j;
    j[label_key] = r.label;
    j["total_images"] = r.total_images;
    j["tested"] = r.tested;
    j["true_classify"] = r.true_classify;
    j["false_classify"] = r.false_classify;
    j["true_rate"] = r.true_rate;
    j["false_rate"] = r.false_rate;
    return j;
}

std::array<std::string, 7> header_with(const char* first, const char* second) {
    std::array<std::string, 7> h;
    h[0] = first;
    h[1] = second;
    for (std::size_t c = 2; c < 7; ++c) h[c] = kColumns[c];
    return h;
}

} // namespace

double rate(std::size_t true_count, std::size_t tested) {
    if (tested == 0) throw ValueError("rate: tested count is zero");
    if (true_count > tested)
        throw ValueError("rate: true count " + std::to_string(true_count) +
                         " exceeds tested " + std::to_string(tested));
    const double pct = 100.0 * static_cast<double>(true_count) /
                       static_cast<double>(tested);
    return std::floor(pct * 100.0 + 0.5) / 100.0;
}

EvaluationReport score(
    const std::vector<std::pair<const Sample*, ClassificationResult>>& results,
    const std::map<std::string, std::size_t>& totals) {
    if (results.empty()) throw ValueError("score: no results to score");

    EvaluationReport report;
    std::map<std::string, std::size_t> row_of;
    for (const auto& [sample, outcome] : results) {
        const std::string& actual = sample->label;
        auto [it, fresh] = row_of.try_emplace(actual, report.rows.size());
        if (fresh) {
            LabelRow row;
            row.label = actual;
            const auto t = totals.find(actual);
            if (t != totals.end()) row.total_images = t->second;
            report.rows.push_back(std::move(row));
        }
        LabelRow& row = report.rows[it->second];
        ++row.tested;
        if (outcome.label == actual)
            ++row.true_classify;
        else
            ++row.false_classify;
        ++report.confusion[{actual, outcome.label}];
    }

    report.total.label = "total";
    for (LabelRow& row : report.rows) {
        if (row.total_images == 0) row.total_images = row.tested;
        fill_rates(row);
        report.total.total_images += row.total_images;
        report.total.tested += row.tested;
        report.total.true_classify += row.true_classify;
        report.total.false_classify += row.false_classify;
    }
    fill_rates(report.total);
    return report;
}

AggregateReport aggregate(
    const std::vector<std::pair<std::string, EvaluationReport>>& reports) {
    if (reports.empty()) throw ValueError("aggregate: no reports");

    AggregateReport agg;
    agg.grand.label = "total";
    for (const auto& [name, report] : reports) {
        LabelRow row = report.total;
        row.label = name;
        agg.rows.push_back(row);
        agg.grand.total_images += row.total_images;
        agg.grand.tested += row.tested;
        agg.grand.true_classify += row.true_classify;
        agg.grand.false_classify += row.false_classify;
    }
    fill_rates(agg.grand);
    return agg;
}

std::string render_table(const EvaluationReport& report, TableStyle style,
                         int decimals) {
    const auto header = header_with(kColumns[0], kColumns[1]);
    switch (style) {
        case TableStyle::text:
            return render_text(table_cells(report.rows, report.total, "total",
                                           decimals),
                               header);
        case TableStyle::csv:
            return render_csv(table_cells(report.rows, report.total, "total",
                                          decimals),
                              header);
        case TableStyle::json: {
            nlohmann::ordered_json j;
            j["rows"] = nlohmann::ordered_json::array();
            for (const LabelRow& r : report.rows)
                j["rows"].push_back(row_json(r, "feeling"));
            j["total"] = row_json(report.total, "feeling");
            j["confusion"] = nlohmann::ordered_json::array();
            for (const auto& [pair, count] : report.confusion) {
                nlohmann::ordered_json c;
                c["actual"] = pair.first;
                c["predicted"] = pair.second;
                c["count"] = count;
                j["confusion"].push_back(c);
            }
            return j.dump(2) + "\n";
        }
    }
    throw ValueError("render_table: unknown style");
}

std::string render_table(const AggregateReport& report, TableStyle style,
                         int decimals) {
    // Aggregate tables swap the leading columns: data base, total image, ...
    std::array<std::string, 7> header;
    header[0] = "data base";
    header[1] = "total image";
    for (std::size_t c = 2; c < 7; ++c) header[c] = kColumns[c];

    std::vector<std::array<std::string, 7>> cells;
    for (const LabelRow& r : report.rows)
        cells.push_back({r.label, std::to_string(r.total_images),
                         std::to_string(r.tested), std::to_string(r.true_classify),
                         std::to_string(r.false_classify),
                         fmt_rate(r.true_rate, decimals),
                         fmt_rate(r.false_rate, decimals)});
    cells.push_back({"total", std::to_string(report.grand.total_images),
                     std::to_string(report.grand.tested),
                     std::to_string(report.grand.true_classify),
                     std::to_string(report.grand.false_classify),
                     fmt_rate(report.grand.true_rate, decimals),
                     fmt_rate(report.grand.false_rate, decimals)});

    switch (style) {
        case TableStyle::text:
            return render_text(cells, header);
        case TableStyle::csv:
            return render_csv(cells, header);
        case TableStyle::json: {
            nlohmann::ordered_json j;
            j["rows"] = nlohmann::ordered_json::array();
            for (const LabelRow& r : report.rows)
                j["rows"].push_back(row_json(r, "data_base"));
            j["total"] = row_json(report.grand, "data_base");
            return j.dump(2) + "\n";
        }
    }
    throw ValueError("render_table: unknown style");
}

void emit_chart_data(const EvaluationReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << "label,true_rate,false_rate\n";
    for (const LabelRow& r : report.rows)
        out << r.label << ',' << fmt_rate(r.true_rate, 2) << ','
            << fmt_rate(r.false_rate, 2) << '\n';
    out << "total," << fmt_rate(report.total.true_rate, 2) << ','
        << fmt_rate(report.total.false_rate, 2) << '\n';
    if (!out) throw IoError(path + ": write failed");
}

} // namespace eigenexpr
