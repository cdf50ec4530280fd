#include "fraghmm/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fraghmm {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, delimiter)) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == delimiter) cells.push_back("");
    return cells;
}

bool is_missing_token(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "NULL" ||
           cell == "null" || cell == "na";
}

double parse_cell(const std::string& cell, std::size_t row) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw std::runtime_error("load_csv: row " + std::to_string(row) + ": cannot parse '" + cell +
                                 "' as a number");
    }
    if (!std::isfinite(value)) {
        throw std::runtime_error("load_csv: row " + std::to_string(row) + ": non-finite value '" + cell + "'");
    }
    return value;
}

}  // namespace

MissingPolicy parse_missing_policy(const std::string& name) {
    if (name == "error") return MissingPolicy::kError;
    if (name == "drop") return MissingPolicy::kDrop;
    if (name == "forward-fill") return MissingPolicy::kForwardFill;
    throw std::invalid_argument("unknown missing-value policy '" + name +
                                "' (expected error, drop, or forward-fill)");
}

RawSeries load_csv(const std::string& path, const std::string& column, MissingPolicy policy,
                   char delimiter) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_csv: " + path + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> header = split_row(line, delimiter);
    std::size_t col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == column) {
            col = i;
            break;
        }
    }
    if (col == header.size()) {
        std::string available;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i > 0) available += ", ";
            available += header[i];
        }
        throw std::runtime_error("load_csv: no column '" + column + "' in " + path +
                                 " (available: " + available + ")");
    }

    RawSeries out;
    out.source = path;
    out.column = column;

    std::size_t row = 1;  // header is row 1
    bool have_last = false;
    double last = 0.0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_row(line, delimiter);
        if (col >= cells.size()) {
            throw std::runtime_error("load_csv: row " + std::to_string(row) + " has " +
                                     std::to_string(cells.size()) + " cells, column '" + column +
                                     "' needs " + std::to_string(col + 1));
        }
        const std::string& cell = cells[col];
        if (is_missing_token(cell)) {
            switch (policy) {
                case MissingPolicy::kError:
                    throw std::runtime_error("load_csv: row " + std::to_string(row) +
                                             ": missing value (policy is error)");
                case MissingPolicy::kDrop:
                    continue;
                case MissingPolicy::kForwardFill:
                    if (!have_last) {
                        throw std::runtime_error("load_csv: row " + std::to_string(row) +
                                                 ": missing value with nothing to forward-fill from");
                    }
                    out.values.push_back(last);
                    continue;
            }
        }
        const double v = parse_cell(cell, row);
        out.values.push_back(v);
        last = v;
        have_last = true;
    }
    if (out.values.empty()) throw std::runtime_error("load_csv: no usable rows in " + path);
    return out;
}

DiscretizationSpec make_quantile_spec(const std::vector<double>& values, int n_bins) {
    if (n_bins < 2) throw std::invalid_argument("make_quantile_spec: need at least 2 bins");
    if (values.size() < 2) throw std::invalid_argument("make_quantile_spec: need at least 2 values");
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("make_quantile_spec: non-finite value");
    }

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    DiscretizationSpec spec;
    spec.cut_points.reserve(static_cast<std::size_t>(n_bins) - 1);
    const std::size_t n = sorted.size();
    for (int i = 1; i < n_bins; ++i) {
        // Quantile with linear interpolation between closest order statistics.
        const double h = static_cast<double>(n - 1) * static_cast<double>(i) / n_bins;
        const std::size_t lo = static_cast<std::size_t>(h);
        const double frac = h - static_cast<double>(lo);
        const std::size_t hi = std::min(lo + 1, n - 1);
        spec.cut_points.push_back(sorted[lo] + frac * (sorted[hi] - sorted[lo]));
    }
    for (std::size_t i = 1; i < spec.cut_points.size(); ++i) {
        if (!(spec.cut_points[i] > spec.cut_points[i - 1])) {
            throw std::runtime_error(
                "make_quantile_spec: coincident cut points (too many ties for " + std::to_string(n_bins) +
                " bins; try fewer bins)");
        }
    }

    if (n_bins == 3) {
        spec.labels = {"low", "medium", "high"};
    } else {
        for (int i = 0; i < n_bins; ++i) spec.labels.push_back("bin_" + std::to_string(i));
    }
    return spec;
}

int encode_value(const DiscretizationSpec& spec, double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("encode_value: non-finite value");
    int symbol = 0;
    for (double cut : spec.cut_points) {
        if (cut <= v) ++symbol;
    }
    return symbol;
}

Sequence encode_with_spec(const DiscretizationSpec& spec, const std::vector<double>& values) {
    if (spec.cut_points.empty()) throw std::invalid_argument("encode_with_spec: empty spec");
    std::vector<int> symbols;
    symbols.reserve(values.size());
    for (double v : values) symbols.push_back(encode_value(spec, v));
    return Sequence(std::move(symbols), static_cast<int>(spec.cut_points.size()) + 1);
}

Sequence discretize(const std::vector<double>& values, int n_bins, DiscretizationSpec* spec_out) {
    DiscretizationSpec spec = make_quantile_spec(values, n_bins);
    Sequence seq = encode_with_spec(spec, values);
    if (spec_out != nullptr) *spec_out = std::move(spec);
    return seq;
}

DiscretizationSpec parse_spec_json(const std::string& text) {
    json j = json::parse(text);
    if (!j.is_object() || !j.contains("cut_points") || !j.contains("labels")) {
        throw std::runtime_error("spec JSON must be an object with cut_points and labels");
    }
    DiscretizationSpec spec;
    for (const auto& c : j.at("cut_points")) spec.cut_points.push_back(c.get<double>());
    for (const auto& l : j.at("labels")) spec.labels.push_back(l.get<std::string>());
    if (spec.cut_points.empty()) throw std::runtime_error("spec JSON has no cut points");
    if (spec.labels.size() != spec.cut_points.size() + 1) {
        throw std::runtime_error("spec JSON needs exactly one more label than cut points");
    }
    for (std::size_t i = 0; i < spec.cut_points.size(); ++i) {
        if (!std::isfinite(spec.cut_points[i])) throw std::runtime_error("spec JSON cut point not finite");
        if (i > 0 && !(spec.cut_points[i] > spec.cut_points[i - 1])) {
            throw std::runtime_error("spec JSON cut points must be strictly increasing");
        }
    }
    return spec;
}

std::string spec_to_json(const DiscretizationSpec& spec) {
    json j;
    j["cut_points"] = spec.cut_points;
    j["labels"] = spec.labels;
    return j.dump(2) + "\n";
}

DiscretizationSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_spec: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec_json(buf.str());
}

void save_spec(const DiscretizationSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_spec: cannot open " + path + " for writing");
    out << spec_to_json(spec);
}

}  // namespace fraghmm
