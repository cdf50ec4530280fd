#include "fraghmm/hmm.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fraghmm/rng.hpp"
#include "json.hpp"

namespace fraghmm {

Sequence::Sequence(std::vector<int> symbols, int alphabet_size)
    : symbols_(std::move(symbols)), alphabet_size_(alphabet_size) {
    if (alphabet_size_ < 1) throw std::invalid_argument("Sequence: alphabet_size must be >= 1");
    if (symbols_.empty()) throw std::invalid_argument("Sequence: length must be >= 1");
    for (int s : symbols_) {
        if (s < 0 || s >= alphabet_size_) {
            throw std::invalid_argument("Sequence: symbol " + std::to_string(s) +
                                        " outside alphabet of size " + std::to_string(alphabet_size_));
        }
    }
}

Hmm::Hmm(StochasticMatrix transition, StochasticMatrix emission, std::string label)
    : transition_(std::move(transition)),
      emission_(std::move(emission)),
      stationary_(stationary_distribution(transition_)),
      label_(std::move(label)) {
    if (!transition_.inner().square()) {
        throw std::invalid_argument("Hmm: transition matrix must be square");
    }
    if (emission_.rows() != transition_.rows()) {
        throw std::invalid_argument("Hmm: emission rows (" + std::to_string(emission_.rows()) +
                                    ") must match state count (" + std::to_string(transition_.rows()) + ")");
    }
}

SymbolOperator symbol_operator(const Hmm& h, int symbol) {
    if (symbol < 0 || symbol >= h.alphabet_size()) {
        throw std::invalid_argument("symbol_operator: symbol " + std::to_string(symbol) +
                                    " outside alphabet of size " + std::to_string(h.alphabet_size()));
    }
    const int n = h.num_states();
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = h.transition()(i, j) * h.emission()(j, symbol);
    return {std::move(m), symbol};
}

double fragment_likelihood(const Hmm& h, std::span<const int> fragment) {
    if (fragment.empty()) throw std::invalid_argument("fragment_likelihood: empty fragment");
    const int n = h.num_states();
    const Matrix& p = h.transition().inner();
    const Matrix& s = h.emission().inner();

    std::vector<double> v(h.stationary().entries());
    std::vector<double> next(static_cast<std::size_t>(n));
    for (int sym : fragment) {
        if (sym < 0 || sym >= h.alphabet_size()) {
            throw std::invalid_argument("fragment_likelihood: symbol outside the model alphabet");
        }
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += v[static_cast<std::size_t>(i)] * p(i, j);
            next[static_cast<std::size_t>(j)] = acc * s(j, sym);
        }
        std::swap(v, next);
    }
    double total = 0.0;
    for (double x : v) total += x;
    return total;
}

double fragment_likelihood(const Hmm& h, const Sequence& fragment) {
    if (fragment.alphabet_size() != h.alphabet_size()) {
        throw std::invalid_argument("fragment_likelihood: alphabet mismatch (sequence " +
                                    std::to_string(fragment.alphabet_size()) + ", model " +
                                    std::to_string(h.alphabet_size()) + ")");
    }
    return fragment_likelihood(h, std::span<const int>(fragment.symbols()));
}

LogLikelihood log_likelihood_full(const Hmm& h, const Sequence& y) {
    if (y.alphabet_size() != h.alphabet_size()) {
        throw std::invalid_argument("log_likelihood_full: alphabet mismatch");
    }
    const int n = h.num_states();
    const Matrix& p = h.transition().inner();
    const Matrix& s = h.emission().inner();

    std::vector<double> v(h.stationary().entries());
    std::vector<double> next(static_cast<std::size_t>(n));
    double log_lik = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const int sym = y[t];
        double scale = 0.0;
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += v[static_cast<std::size_t>(i)] * p(i, j);
            next[static_cast<std::size_t>(j)] = acc * s(j, sym);
            scale += next[static_cast<std::size_t>(j)];
        }
        if (scale == 0.0) {
            return {-std::numeric_limits<double>::infinity(), true};
        }
        for (int j = 0; j < n; ++j) next[static_cast<std::size_t>(j)] /= scale;
        log_lik += std::log(scale);
        std::swap(v, next);
    }
    return {log_lik, false};
}

Sequence simulate(const Hmm& h, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("simulate: n must be >= 1");
    const int ns = h.num_states();
    const Matrix& p = h.transition().inner();
    const Matrix& s = h.emission().inner();
    Rng rng(seed);

    std::vector<int> out;
    out.reserve(n);
    int state = rng.categorical(h.stationary().entries());
    for (std::size_t t = 0; t < n; ++t) {
        out.push_back(rng.categorical(std::span<const double>(&s.data[static_cast<std::size_t>(state) * s.cols],
                                                              static_cast<std::size_t>(s.cols))));
        state = rng.categorical(std::span<const double>(&p.data[static_cast<std::size_t>(state) * ns],
                                                        static_cast<std::size_t>(ns)));
    }
    return Sequence(std::move(out), h.alphabet_size());
}

namespace {

Matrix matrix_from_json(const nlohmann::json& rows, const std::string& what) {
    if (!rows.is_array() || rows.empty()) {
        throw std::invalid_argument("model JSON: " + what + " must be a non-empty array of rows");
    }
    const std::size_t ncols = rows[0].is_array() ? rows[0].size() : 0;
    if (ncols == 0) throw std::invalid_argument("model JSON: " + what + " rows must be non-empty arrays");
    std::vector<double> data;
    data.reserve(rows.size() * ncols);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != ncols) {
            throw std::invalid_argument("model JSON: " + what + " rows must all have the same length");
        }
        for (const auto& v : row) {
            if (!v.is_number()) throw std::invalid_argument("model JSON: " + what + " entries must be numbers");
            data.push_back(v.get<double>());
        }
    }
    return Matrix(static_cast<int>(rows.size()), static_cast<int>(ncols), std::move(data));
}

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Hmm parse_hmm_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("model JSON: ") + e.what());
    }
    if (!j.contains("transition") || !j.contains("emission")) {
        throw std::invalid_argument("model JSON: missing \"transition\" or \"emission\"");
    }
    StochasticMatrix transition(matrix_from_json(j["transition"], "transition"));
    StochasticMatrix emission(matrix_from_json(j["emission"], "emission"));
    std::string label = j.value("label", std::string());
    return Hmm(std::move(transition), std::move(emission), std::move(label));
}

std::string hmm_to_json(const Hmm& h) {
    nlohmann::json j;
    j["label"] = h.label();
    j["transition"] = matrix_to_json(h.transition().inner());
    j["emission"] = matrix_to_json(h.emission().inner());
    return j.dump(2) + "\n";
}

Hmm load_hmm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_hmm_json(buf.str());
    } catch (const std::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void save_hmm(const Hmm& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file " + path);
    out << hmm_to_json(h);
}

Sequence load_sequence(const std::string& path, int alphabet_size) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sequence file " + path);
    std::vector<int> symbols;
    std::string line;
    int max_symbol = -1;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t pos = 0;
        int value = 0;
        try {
            value = std::stoi(line, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": not an integer symbol");
        }
        if (pos != line.size() || value < 0) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": not a nonnegative integer symbol");
        }
        max_symbol = std::max(max_symbol, value);
        symbols.push_back(value);
    }
    if (symbols.empty()) throw std::invalid_argument(path + ": empty sequence file");
    return Sequence(std::move(symbols), alphabet_size > 0 ? alphabet_size : max_symbol + 1);
}

void save_sequence(const Sequence& y, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write sequence file " + path);
    for (std::size_t t = 0; t < y.size(); ++t) out << y[t] << "\n";
}

}  // namespace fraghmm
