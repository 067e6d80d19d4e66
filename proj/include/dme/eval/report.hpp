#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "dme/eval/metrics.hpp"

namespace dme::eval {

enum class ReportFormat { csv, markdown };

inline std::string format_2dp(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// Column order is fixed: 1s, 2s, 3s, Avg for L2, then the same for the
// collision rate, then the mismatch rate when present.
inline std::string metrics_csv_row(const PlanMetrics& m) {
    std::ostringstream out;
    out << format_2dp(m.l2.h1) << ',' << format_2dp(m.l2.h2) << ',' << format_2dp(m.l2.h3) << ','
        << format_2dp(m.l2.avg) << ',' << format_2dp(m.collision.h1) << ','
        << format_2dp(m.collision.h2) << ',' << format_2dp(m.collision.h3) << ','
        << format_2dp(m.collision.avg);
    if (m.mismatch_rate) out << ',' << format_2dp(*m.mismatch_rate);
    return out.str();
}

inline std::string metrics_csv_header(const PlanMetrics& m) {
    std::string h = "l2_1s,l2_2s,l2_3s,l2_avg,col_1s,col_2s,col_3s,col_avg";
    if (m.mismatch_rate) h += ",mismatch_rate";
    return h;
}

inline std::string metrics_markdown(const PlanMetrics& m) {
    std::ostringstream out;
    out << "| L2 1s (m) | L2 2s (m) | L2 3s (m) | L2 Avg (m) | Col 1s (%) | Col 2s (%) | "
           "Col 3s (%) | Col Avg (%) |";
    if (m.mismatch_rate) out << " Mismatch (%) |";
    out << "\n|---|---|---|---|---|---|---|---|";
    if (m.mismatch_rate) out << "---|";
    out << "\n| " << format_2dp(m.l2.h1) << " | " << format_2dp(m.l2.h2) << " | "
        << format_2dp(m.l2.h3) << " | " << format_2dp(m.l2.avg) << " | "
        << format_2dp(m.collision.h1) << " | " << format_2dp(m.collision.h2) << " | "
        << format_2dp(m.collision.h3) << " | " << format_2dp(m.collision.avg) << " |";
    if (m.mismatch_rate) out << ' ' << format_2dp(*m.mismatch_rate) << " |";
    out << '\n';
    return out.str();
}

inline void emit_report(const PlanMetrics& m, const std::filesystem::path& path,
                        ReportFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_report: cannot write " + path.string());
    if (format == ReportFormat::csv)
        out << metrics_csv_header(m) << '\n' << metrics_csv_row(m) << '\n';
    else
        out << metrics_markdown(m);
}

// test/CLI helper: recover the values from a markdown report
inline PlanMetrics parse_markdown_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_markdown_report: cannot read " + path.string());
    std::string line, data;
    int row = 0;
    while (std::getline(in, line))
        if (!line.empty() && line.front() == '|' && ++row == 3) data = line;
    if (data.empty()) throw std::runtime_error("parse_markdown_report: no data row");
    std::vector<double> values;
    std::istringstream cells(data);
    std::string cell;
    while (std::getline(cells, cell, '|')) {
        const std::string t = trim(cell);
        if (!t.empty()) values.push_back(std::stod(t));
    }
    if (values.size() != 8 && values.size() != 9)
        throw std::runtime_error("parse_markdown_report: expected 8 or 9 values, got " +
                                 std::to_string(values.size()));
    PlanMetrics m;
    m.l2 = {values[0], values[1], values[2], values[3]};
    m.collision = {values[4], values[5], values[6], values[7]};
    if (values.size() == 9) m.mismatch_rate = values[8];
    return m;
}

// Table-3-shaped ablation report: one row per mode, average L2 and
// collision rate plus the decision-mismatch column.
struct AblationRow {
    std::string label;
    PlanMetrics metrics;
};

inline void emit_ablation_report(std::span<const AblationRow> rows,
                                 const std::filesystem::path& path, ReportFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_ablation_report: cannot write " + path.string());
    if (format == ReportFormat::csv) {
        out << "mode,l2_avg,col_avg,mismatch_rate\n";
        for (const AblationRow& r : rows)
            out << r.label << ',' << format_2dp(r.metrics.l2.avg) << ','
                << format_2dp(r.metrics.collision.avg) << ','
                << format_2dp(r.metrics.mismatch_rate.value_or(0.0)) << '\n';
    } else {
        out << "| Mode | L2 Avg (m) | Col Avg (%) | Mismatch (%) |\n|---|---|---|---|\n";
        for (const AblationRow& r : rows)
            out << "| " << r.label << " | " << format_2dp(r.metrics.l2.avg) << " | "
                << format_2dp(r.metrics.collision.avg) << " | "
                << format_2dp(r.metrics.mismatch_rate.value_or(0.0)) << " |\n";
    }
}

} // namespace dme::eval
