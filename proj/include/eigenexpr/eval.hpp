#ifndef EIGENEXPR_EVAL_HPP
#define EIGENEXPR_EVAL_HPP

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "eigenexpr/classify.hpp"

namespace eigenexpr {

/// One table row: counts and percentage rates for a single expression (or,
/// in aggregate tables, a single dataset). total_images is the source
/// database's image count for this label when known, else equals tested.
struct LabelRow {
    std::string label;
    std::size_t total_images = 0;
    std::size_t tested = 0;
    std::size_t true_classify = 0;
    std::size_t false_classify = 0;
    double true_rate = 0.0;
    double false_rate = 0.0;
};

/// Per-expression scoring of one batch run. Rows follow the labels' first
/// appearance in the test results; confusion counts (actual, predicted)
/// pairs.
struct EvaluationReport {
    std::vector<LabelRow> rows;
    LabelRow total;
    std::map<std::pair<std::string, std::string>, std::size_t> confusion;
};

/// Cross-dataset comparison: one row per named report plus a grand total
/// whose rates are recomputed from the summed counts.
struct AggregateReport {
    std::vector<LabelRow> rows;
    LabelRow grand;
};

/// 100 * true_count / tested, rounded half-up to 2 decimals.
double rate(std::size_t true_count, std::size_t tested);

/// Scores batch results: a prediction is true iff the predicted label equals
/// the sample's label exactly. `totals` optionally supplies per-label source
/// image counts for the "total image" column.
EvaluationReport score(
    const std::vector<std::pair<const Sample*, ClassificationResult>>& results,
    const std::map<std::string, std::size_t>& totals = {});

AggregateReport aggregate(
    const std::vector<std::pair<std::string, EvaluationReport>>& reports);

enum class TableStyle { text, csv, json };

/// Renders a report as a results table. Text and CSV share the
/// column header `total image, feeling, tested image, true classify,
/// false classify, true rate %, false rate %`; `decimals` (1 or 2) controls
/// rate display precision in text/csv. Output is byte-deterministic.
std::string render_table(const EvaluationReport& report, TableStyle style,
                         int decimals = 2);
std::string render_table(const AggregateReport& report, TableStyle style,
                         int decimals = 2);

/// Writes `label,true_rate,false_rate` CSV rows (report order, then the
/// total row) for external chart tooling.
void emit_chart_data(const EvaluationReport& report, const std::string& path);

} // namespace eigenexpr

#endif // EIGENEXPR_EVAL_HPP
