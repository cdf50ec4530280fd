#include "fraghmm/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fraghmm {

namespace {

using nlohmann::json;

// 5 significant digits for text tables.
std::string short_num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.5g", x);
    return buf;
}

// Full-precision cell for CSV: shortest digit string that round-trips.
std::string full_num(double x) {
    if (std::isnan(x)) return "";
    return json(x).dump();
}

json json_num(double x) {
    if (std::isnan(x)) return nullptr;
    return x;
}

// Right-aligned fixed-width table with a two-space gutter.
std::string render_table(const std::vector<std::vector<std::string>>& cells) {
    if (cells.empty()) return "";
    std::vector<std::size_t> width(cells.front().size(), 0);
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream out;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out << "  ";
            out << std::string(width[c] - row[c].size(), ' ') << row[c];
        }
        out << '\n';
    }
    return out.str();
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c > 0) line += ',';
        line += cells[c];
    }
    line += '\n';
    return line;
}

std::string or_default(const std::string& label, const char* fallback) {
    return label.empty() ? fallback : label;
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
    if (name == "text") return ReportFormat::kText;
    if (name == "csv") return ReportFormat::kCsv;
    if (name == "json") return ReportFormat::kJson;
    throw std::invalid_argument("unknown format '" + name + "' (expected text, csv, or json)");
}

std::string format_p_value(double p) {
    if (p == 0.0) return "<1e-300";
    return short_num(p);
}

std::string render_compare_report(const SweepResult& sweep, const std::string& label_1,
                                  const std::string& label_2, ReportFormat format) {
    const std::string m1 = or_default(label_1, "model1");
    const std::string m2 = or_default(label_2, "model2");
    const std::vector<std::string> header = {
        "r",           "mean_diff", "std",         "z",
        "p",           "p_two",     "mu1_hat",     "mu2_hat",
        "mu1(r)/mu1(r-1)", "mu2(r)/mu2(r-1)", "K^r/n", "warn"};

    if (format == ReportFormat::kJson) {
        json j;
        j["model_1"] = m1;
        j["model_2"] = m2;
        j["n"] = sweep.n;
        j["alphabet_size"] = sweep.alphabet_size;
        j["k"] = sweep.rows.empty() ? 0 : sweep.rows.front().k;
        j["ratio_definition"] = "mu_hat(r) / mu_hat(r-1)";
        j["rows"] = json::array();
        for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
            const TestResult& t = sweep.rows[i];
            const SweepRatio& g = sweep.ratios[i];
            json row;
            row["r"] = t.r;
            row["k"] = t.k;
            row["mean_diff"] = t.mean_diff;
            row["sample_std"] = t.sample_std;
            row["z"] = t.z;
            row["p_value"] = t.p_value;
            row["p_two_sided"] = t.p_two_sided;
            row["mu1_hat"] = t.mu1_hat;
            row["mu2_hat"] = t.mu2_hat;
            row["ratio_1"] = json_num(g.ratio_1);
            row["ratio_2"] = json_num(g.ratio_2);
            row["sparsity_ratio"] = t.sparsity_ratio;
            row["sparsity_warning"] = t.sparsity_warning;
            row["degenerate"] = t.degenerate;
            j["rows"].push_back(row);
        }
        return j.dump(2) + "\n";
    }

    if (format == ReportFormat::kCsv) {
        std::string out = csv_line({"r", "k", "mean_diff", "sample_std", "z", "p_value", "p_two_sided",
                                    "mu1_hat", "mu2_hat", "mu1(r)/mu1(r-1)", "mu2(r)/mu2(r-1)",
                                    "sparsity_ratio", "sparsity_warning"});
        for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
            const TestResult& t = sweep.rows[i];
            const SweepRatio& g = sweep.ratios[i];
            out += csv_line({std::to_string(t.r), std::to_string(t.k), full_num(t.mean_diff),
                             full_num(t.sample_std), full_num(t.z), full_num(t.p_value),
                             full_num(t.p_two_sided), full_num(t.mu1_hat), full_num(t.mu2_hat),
                             full_num(g.ratio_1), full_num(g.ratio_2), full_num(t.sparsity_ratio),
                             t.sparsity_warning ? "true" : "false"});
        }
        return out;
    }

    std::ostringstream out;
    out << "fragment comparison: " << m1 << " vs " << m2;
    if (!sweep.rows.empty()) out << "  (k = " << sweep.rows.front().k << " fragments per r)";
    out << "\n";
    out << "sequence: n = " << sweep.n << ", alphabet " << sweep.alphabet_size << "\n";
    out << "H0: mu_1(r) = mu_2(r)   H1: mu_1(r) > mu_2(r)   (p is one-sided)\n\n";
    std::vector<std::vector<std::string>> cells = {header};
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        const TestResult& t = sweep.rows[i];
        const SweepRatio& g = sweep.ratios[i];
        cells.push_back({std::to_string(t.r), short_num(t.mean_diff), short_num(t.sample_std),
                         short_num(t.z), format_p_value(t.p_value), format_p_value(t.p_two_sided),
                         short_num(t.mu1_hat), short_num(t.mu2_hat),
                         std::isnan(g.ratio_1) ? "" : short_num(g.ratio_1),
                         std::isnan(g.ratio_2) ? "" : short_num(g.ratio_2),
                         short_num(t.sparsity_ratio), t.sparsity_warning ? "yes" : ""});
    }
    out << render_table(cells);
    bool warned = false;
    for (const TestResult& t : sweep.rows) warned = warned || t.sparsity_warning;
    if (warned) {
        out << "\nwarn: K^r/n > 0.1 — fragment space too sparse for reliable estimates at that r\n";
    }
    return out.str();
}

ExactReport build_exact_report(const Hmm& h0, const Hmm& h1, const Hmm& h2, int r_min, int r_max) {
    if (r_min < 1) throw std::invalid_argument("build_exact_report: r_min must be >= 1");
    if (r_max < r_min) throw std::invalid_argument("build_exact_report: r_max must be >= r_min");

    ExactReport report;
    report.r_min = r_min;
    report.r_max = r_max;
    report.label_0 = h0.label();
    report.label_1 = h1.label();
    report.label_2 = h2.label();

    const std::vector<double> mu1 = mu_curve(h0, h1, r_max);
    const std::vector<double> mu2 = mu_curve(h0, h2, r_max);
    const double nan = std::nan("");

    report.rows.reserve(static_cast<std::size_t>(r_max - r_min + 1));
    for (int r = r_min; r <= r_max; ++r) {
        ExactReportRow row;
        row.r = r;
        row.mu_1 = mu1[static_cast<std::size_t>(r) - 1];
        row.mu_2 = mu2[static_cast<std::size_t>(r) - 1];
        row.second_moment = second_moment(h0, h1, h2, r);
        const double mean_diff = row.mu_1 - row.mu_2;
        double s2 = row.second_moment - mean_diff * mean_diff;
        if (s2 < 0.0) s2 = 0.0;  // tiny negative residue from cancellation
        row.sigma2 = s2;
        row.ratio_1 = r >= 2 ? row.mu_1 / mu1[static_cast<std::size_t>(r) - 2] : nan;
        row.ratio_2 = r >= 2 ? row.mu_2 / mu2[static_cast<std::size_t>(r) - 2] : nan;
        report.rows.push_back(row);
    }

    report.lambda_1 = dominant_eigenvalue(pair_operator(h0, h1).w).value;
    report.lambda_2 = dominant_eigenvalue(pair_operator(h0, h2).w).value;
    report.threshold_12 = dominance_threshold(h0, h1, h2, r_max);
    report.threshold_21 = dominance_threshold(h0, h2, h1, r_max);
    return report;
}

std::string render_exact_report(const ExactReport& report, ReportFormat format) {
    const std::string m1 = or_default(report.label_1, "model1");
    const std::string m2 = or_default(report.label_2, "model2");

    if (format == ReportFormat::kJson) {
        json j;
        j["model_0"] = or_default(report.label_0, "model0");
        j["model_1"] = m1;
        j["model_2"] = m2;
        j["ratio_definition"] = "mu(r) / mu(r-1)";
        j["lambda_1"] = report.lambda_1;
        j["lambda_2"] = report.lambda_2;
        j["dominance_threshold_1_over_2"] =
            report.threshold_12 ? json(*report.threshold_12) : json(nullptr);
        j["dominance_threshold_2_over_1"] =
            report.threshold_21 ? json(*report.threshold_21) : json(nullptr);
        j["rows"] = json::array();
        for (const ExactReportRow& row : report.rows) {
            json jr;
            jr["r"] = row.r;
            jr["mu_1"] = row.mu_1;
            jr["mu_2"] = row.mu_2;
            jr["second_moment"] = row.second_moment;
            jr["sigma2"] = row.sigma2;
            jr["ratio_1"] = json_num(row.ratio_1);
            jr["ratio_2"] = json_num(row.ratio_2);
            j["rows"].push_back(jr);
        }
        return j.dump(2) + "\n";
    }

    if (format == ReportFormat::kCsv) {
        std::string out = csv_line({"r", "mu_1", "mu_2", "second_moment", "sigma2",
                                    "mu1(r)/mu1(r-1)", "mu2(r)/mu2(r-1)"});
        for (const ExactReportRow& row : report.rows) {
            out += csv_line({std::to_string(row.r), full_num(row.mu_1), full_num(row.mu_2),
                             full_num(row.second_moment), full_num(row.sigma2), full_num(row.ratio_1),
                             full_num(row.ratio_2)});
        }
        return out;
    }

    std::ostringstream out;
    out << "exact fragment metrics under " << or_default(report.label_0, "model0") << ": " << m1
        << " vs " << m2 << "\n\n";
    std::vector<std::vector<std::string>> cells = {
        {"r", "mu_1", "mu_2", "E[(L1-L2)^2]", "sigma2", "mu1(r)/mu1(r-1)", "mu2(r)/mu2(r-1)"}};
    for (const ExactReportRow& row : report.rows) {
        cells.push_back({std::to_string(row.r), short_num(row.mu_1), short_num(row.mu_2),
                         short_num(row.second_moment), short_num(row.sigma2),
                         std::isnan(row.ratio_1) ? "" : short_num(row.ratio_1),
                         std::isnan(row.ratio_2) ? "" : short_num(row.ratio_2)});
    }
    out << render_table(cells);
    out << "\nlambda_max: " << m1 << " " << short_num(report.lambda_1) << ", " << m2 << " "
        << short_num(report.lambda_2) << "\n";
    out << "dominance " << m1 << " > " << m2 << ": ";
    if (report.threshold_12) {
        out << "from r = " << *report.threshold_12 << " through " << report.r_max << "\n";
    } else {
        out << "not at r_max = " << report.r_max << "\n";
    }
    out << "dominance " << m2 << " > " << m1 << ": ";
    if (report.threshold_21) {
        out << "from r = " << *report.threshold_21 << " through " << report.r_max << "\n";
    } else {
        out << "not at r_max = " << report.r_max << "\n";
    }
    return out.str();
}

}  // namespace fraghmm
