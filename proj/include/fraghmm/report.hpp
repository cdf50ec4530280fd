// Report assembly and rendering for the compare (sampled) and exact
// (closed-form) tables, in aligned text, CSV, or JSON.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fraghmm/exact.hpp"
#include "fraghmm/fragment_test.hpp"

namespace fraghmm {

enum class ReportFormat { kText, kCsv, kJson };

ReportFormat parse_report_format(const std::string& name);

// One-sided/two-sided p for text output; exact zero renders as "<1e-300"
// (the clamp value used by z_statistic).
std::string format_p_value(double p);

std::string render_compare_report(const SweepResult& sweep, const std::string& label_1,
                                  const std::string& label_2, ReportFormat format);

struct ExactReportRow {
    int r = 0;
    double mu_1 = 0.0;
    double mu_2 = 0.0;
    double second_moment = 0.0;  // E[(L1 - L2)^2]
    double sigma2 = 0.0;
    double ratio_1 = 0.0;  // mu_1(r)/mu_1(r-1); NaN when r = 1
    double ratio_2 = 0.0;
};

struct ExactReport {
    std::vector<ExactReportRow> rows;  // r_min..r_max
    double lambda_1 = 0.0;             // dominant eigenvalue of the model-1 pair operator
    double lambda_2 = 0.0;
    std::optional<int> threshold_12;   // smallest r with mu_1 > mu_2 from there through r_max
    std::optional<int> threshold_21;
    std::string label_0, label_1, label_2;
    int r_min = 0;
    int r_max = 0;
};

ExactReport build_exact_report(const Hmm& h0, const Hmm& h1, const Hmm& h2, int r_min, int r_max);

std::string render_exact_report(const ExactReport& report, ReportFormat format);

}  // namespace fraghmm
