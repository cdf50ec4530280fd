// CSV ingestion and quantile discretization of a numeric series into a
// symbol sequence.
#pragma once

#include <string>
#include <vector>

#include "fraghmm/hmm.hpp"

namespace fraghmm {

enum class MissingPolicy {
    kError,        // any missing value aborts the load
    kDrop,         // missing rows are removed
    kForwardFill,  // missing rows repeat the last seen value
};

MissingPolicy parse_missing_policy(const std::string& name);

struct RawSeries {
    std::vector<double> values;
    std::string source;  // file path
    std::string column;
};

// Reads one numeric column of a delimited text file. The first row is a
// header; a cell is missing when empty or any of NA/NaN/nan/NULL/null/na.
RawSeries load_csv(const std::string& path, const std::string& column,
                   MissingPolicy policy = MissingPolicy::kError, char delimiter = ',');

struct DiscretizationSpec {
    std::vector<double> cut_points;  // ascending, size n_bins - 1
    std::vector<std::string> labels; // size n_bins
};

// Equal-probability binning: cut points are the i/n_bins quantiles of the
// whole series (linear interpolation between order statistics). Values on a
// cut go to the upper bin. Coincident cut points (heavily tied data) are an
// error suggesting fewer bins.
DiscretizationSpec make_quantile_spec(const std::vector<double>& values, int n_bins);

// Symbol of v under spec: the number of cut points <= v.
int encode_value(const DiscretizationSpec& spec, double v);

Sequence encode_with_spec(const DiscretizationSpec& spec, const std::vector<double>& values);

// Convenience: make_quantile_spec + encode_with_spec on the same series.
Sequence discretize(const std::vector<double>& values, int n_bins,
                    DiscretizationSpec* spec_out = nullptr);

// Spec JSON format: {"cut_points": [...], "labels": [...]}.
DiscretizationSpec parse_spec_json(const std::string& text);
std::string spec_to_json(const DiscretizationSpec& spec);
DiscretizationSpec load_spec(const std::string& path);
void save_spec(const DiscretizationSpec& spec, const std::string& path);

}  // namespace fraghmm
