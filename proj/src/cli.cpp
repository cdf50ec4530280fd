#include "fraghmm/cli.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fraghmm/baum_welch.hpp"
#include "fraghmm/fragment_test.hpp"
#include "fraghmm/hmm.hpp"
#include "fraghmm/ingest.hpp"
#include "fraghmm/report.hpp"

namespace fraghmm {

namespace {

// Shortest digit string that round-trips, for log output.
std::string full_num(double x) { return nlohmann::json(x).dump(); }

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open " + out_path + " for writing");
    f << text;
}

struct DiscretizeOpts {
    std::string csv, column, missing = "error", delimiter = ",", out, spec_out;
    int bins = 3;
};

struct FitOpts {
    std::string seq, out, trace_out, label;
    int states = 0;
    int max_iters = 1000;
    int restarts = 1;
    int alphabet = 0;  // 0 = infer from the sequence
    double tol = 1e-6;
    std::uint64_t seed = 0;
};

struct CompareOpts {
    std::string seq, model1, model2, format = "text", out;
    int r_min = 3;
    int r_max = 7;
    int k = 1000;
    std::uint64_t seed = 0;
};

struct ExactOpts {
    std::string model0, model1, model2, format = "text", out;
    int r_min = 1;
    int r_max = 10;
};

struct SimulateOpts {
    std::string model, out;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
};

void run_discretize(const DiscretizeOpts& o, std::ostream& out) {
    if (o.delimiter.size() != 1) throw std::invalid_argument("delimiter must be a single character");
    const RawSeries series = load_csv(o.csv, o.column, parse_missing_policy(o.missing), o.delimiter[0]);
    DiscretizationSpec spec;
    const Sequence seq = discretize(series.values, o.bins, &spec);
    save_sequence(seq, o.out);
    if (!o.spec_out.empty()) save_spec(spec, o.spec_out);
    out << "wrote " << seq.size() << " symbols (" << o.bins << " bins) to " << o.out << "\n";
    if (!o.spec_out.empty()) out << "wrote spec to " << o.spec_out << "\n";
}

void run_fit(const FitOpts& o, std::ostream& out) {
    const Sequence y = load_sequence(o.seq, o.alphabet);
    FitConfig cfg;
    cfg.n_states = o.states;
    cfg.max_iters = o.max_iters;
    cfg.tol = o.tol;
    cfg.seed = o.seed;
    cfg.n_restarts = o.restarts;
    cfg.label = o.label;
    const FitResult res = fit(y, cfg);

    if (res.converged) {
        out << "restart " << res.restart_index << ": converged after " << res.iterations_used
            << " iterations\n";
    } else {
        out << "restart " << res.restart_index << ": stopped at max-iters " << res.iterations_used
            << "\n";
    }
    out << "log-likelihood (EM): " << full_num(res.log_likelihood_trace.back()) << "\n";
    out << "log-likelihood (model): " << full_num(sequence_log_likelihood(res.model, y)) << "\n";
    if (!res.unseen_symbols.empty()) {
        out << "note: symbols never observed: ";
        for (std::size_t i = 0; i < res.unseen_symbols.size(); ++i) {
            if (i > 0) out << ", ";
            out << res.unseen_symbols[i];
        }
        out << "\n";
    }
    save_hmm(res.model, o.out);
    out << "wrote " << o.out << "\n";
    if (!o.trace_out.empty()) {
        emit(loglik_trace_csv(res.log_likelihood_trace), o.trace_out, out);
        out << "wrote " << o.trace_out << "\n";
    }
}

void run_compare(const CompareOpts& o, std::ostream& out) {
    if (o.r_max < o.r_min) throw std::invalid_argument("--r-max must be >= --r-min");
    const Hmm h1 = load_hmm(o.model1);
    const Hmm h2 = load_hmm(o.model2);
    if (h1.alphabet_size() != h2.alphabet_size()) {
        throw std::runtime_error("model alphabets differ (" + std::to_string(h1.alphabet_size()) +
                                 " vs " + std::to_string(h2.alphabet_size()) + ")");
    }
    const Sequence y = load_sequence(o.seq, h1.alphabet_size());
    const SweepResult res = sweep(y, h1, h2, o.r_min, o.r_max, o.k, o.seed);
    emit(render_compare_report(res, h1.label(), h2.label(), parse_report_format(o.format)), o.out, out);
}

void run_exact(const ExactOpts& o, std::ostream& out) {
    if (o.r_max < o.r_min) throw std::invalid_argument("--r-max must be >= --r-min");
    const Hmm h0 = load_hmm(o.model0);
    const Hmm h1 = load_hmm(o.model1);
    const Hmm h2 = load_hmm(o.model2);
    if (h0.alphabet_size() != h1.alphabet_size() || h0.alphabet_size() != h2.alphabet_size()) {
        throw std::runtime_error("model alphabets differ");
    }
    emit(render_exact_report(build_exact_report(h0, h1, h2, o.r_min, o.r_max),
                             parse_report_format(o.format)),
         o.out, out);
}

void run_simulate(const SimulateOpts& o, std::ostream& out) {
    const Hmm h = load_hmm(o.model);
    const Sequence y = simulate(h, static_cast<std::size_t>(o.n), o.seed);
    save_sequence(y, o.out);
    out << "wrote " << y.size() << " symbols to " << o.out << "\n";
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"fragment-based statistical comparison of hidden Markov models"};
    app.name("fraghmm");
    app.require_subcommand(1);

    DiscretizeOpts d;
    auto* cmd_d = app.add_subcommand("discretize", "Encode a numeric CSV column by quantile bins");
    cmd_d->add_option("--csv", d.csv, "input CSV file")->required();
    cmd_d->add_option("--column", d.column, "column name to read")->required();
    cmd_d->add_option("--bins", d.bins, "number of quantile bins")->check(CLI::Range(2, 1000));
    cmd_d->add_option("--missing", d.missing, "missing-value policy")
        ->check(CLI::IsMember({"error", "drop", "forward-fill"}));
    cmd_d->add_option("--delimiter", d.delimiter, "field delimiter (single character)");
    cmd_d->add_option("--out", d.out, "output sequence file (one symbol per line)")->required();
    cmd_d->add_option("--spec-out", d.spec_out, "write the cut-point spec JSON here");
    cmd_d->callback([&] { run_discretize(d, out); });

    FitOpts f;
    auto* cmd_f = app.add_subcommand("fit", "Fit a hidden Markov model by Baum-Welch");
    cmd_f->add_option("--seq", f.seq, "input sequence file")->required();
    cmd_f->add_option("--states", f.states, "number of hidden states")->required()->check(CLI::Range(1, 64));
    cmd_f->add_option("--seed", f.seed, "random seed for initialization");
    cmd_f->add_option("--max-iters", f.max_iters, "EM iteration cap")->check(CLI::Range(1, 1000000));
    cmd_f->add_option("--tol", f.tol, "relative log-likelihood convergence tolerance")
        ->check(CLI::PositiveNumber);
    cmd_f->add_option("--restarts", f.restarts, "independent random restarts")->check(CLI::Range(1, 10000));
    cmd_f->add_option("--alphabet", f.alphabet, "alphabet size (0 = infer from data)")
        ->check(CLI::Range(0, 100000));
    cmd_f->add_option("--out", f.out, "output model JSON")->required();
    cmd_f->add_option("--trace-out", f.trace_out, "write iteration log-likelihood CSV here");
    cmd_f->add_option("--label", f.label, "label stored in the model file");
    cmd_f->callback([&] { run_fit(f, out); });

    CompareOpts c;
    auto* cmd_c = app.add_subcommand("compare", "Fragment-sampling Z-test between two models");
    cmd_c->add_option("--seq", c.seq, "observed sequence file")->required();
    cmd_c->add_option("--model1", c.model1, "first candidate model JSON")->required();
    cmd_c->add_option("--model2", c.model2, "second candidate model JSON")->required();
    cmd_c->add_option("--r-min", c.r_min, "smallest fragment length")->check(CLI::Range(2, 1000));
    cmd_c->add_option("--r-max", c.r_max, "largest fragment length")->check(CLI::Range(2, 1000));
    cmd_c->add_option("--k", c.k, "fragments sampled per r")->check(CLI::Range(2, 100000000));
    cmd_c->add_option("--seed", c.seed, "sampling seed");
    cmd_c->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    cmd_c->add_option("--out", c.out, "write the report here instead of stdout");
    cmd_c->callback([&] { run_compare(c, out); });

    ExactOpts e;
    auto* cmd_e = app.add_subcommand("exact", "Closed-form fragment metrics under a reference model");
    cmd_e->add_option("--model0", e.model0, "reference (data-generating) model JSON")->required();
    cmd_e->add_option("--model1", e.model1, "first candidate model JSON")->required();
    cmd_e->add_option("--model2", e.model2, "second candidate model JSON")->required();
    cmd_e->add_option("--r-min", e.r_min, "smallest fragment length")->check(CLI::Range(1, 1000));
    cmd_e->add_option("--r-max", e.r_max, "largest fragment length")->check(CLI::Range(1, 1000));
    cmd_e->add_option("--format", e.format, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    cmd_e->add_option("--out", e.out, "write the report here instead of stdout");
    cmd_e->callback([&] { run_exact(e, out); });

    SimulateOpts s;
    auto* cmd_s = app.add_subcommand("simulate", "Draw a sequence from a model");
    cmd_s->add_option("--model", s.model, "model JSON")->required();
    cmd_s->add_option("-n,--length", s.n, "sequence length")
        ->required()
        ->check(CLI::Range(std::int64_t(1), std::int64_t(100000000)));
    cmd_s->add_option("--seed", s.seed, "simulation seed");
    cmd_s->add_option("--out", s.out, "output sequence file")->required();
    cmd_s->callback([&] { run_simulate(s, out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& pe) {
        if (pe.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << pe.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace fraghmm
