// respars: spectral sparsification of weighted graphs by effective-resistance
// sampling. Subcommands: sparsify, resistances, verify, stats, pi-check.
//
// Exit codes: 0 success, 1 usage, 2 I/O or parse failure, 3 violated
// precondition or solver failure, 4 verification failed.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "respars/errors.hpp"
#include "respars/graph.hpp"
#include "respars/resistance.hpp"
#include "respars/sparsify.hpp"
#include "respars/verify.hpp"

namespace {

using namespace respars;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitVerification = 4;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    std::random_device rd;
    const std::uint64_t seed =
        (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
    std::cerr << "seed: " << seed << " (drawn from entropy; pass --seed to reproduce)\n";
    return seed;
}

// Writes either to a file or to stdout.
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ParseError("cannot open '" + path + "' for writing");
            path_ = path;
        }
    }
    std::ostream& stream() { return path_.empty() ? std::cout : file_; }
    void finish() {
        stream().flush();
        if (!stream()) throw ParseError("write failure on '" + (path_.empty() ? "<stdout>" : path_) + "'");
    }

private:
    std::string path_;
    std::ofstream file_;
};

struct SparsifyArgs {
    std::string input;
    std::string output;
    double epsilon = 0.5;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> q;
    double c0 = 4.0;
    std::optional<double> delta;
    std::string mode = "resistance";
    bool exact = false;
    int verify_retry = 0;
};

int run_sparsify(const SparsifyArgs& args) {
    const WeightedGraph g = load_graph_file(args.input);
    const std::uint64_t base_seed = resolve_seed(args.seed);

    SampleConfig cfg;
    cfg.epsilon = args.epsilon;
    cfg.q = args.q;
    cfg.c0 = args.c0;
    cfg.delta_override = args.delta;
    cfg.mode = args.mode == "degree-bounded" ? SampleMode::DegreeBounded
                                             : SampleMode::Resistance;
    cfg.exact_resistances = args.exact;

    const auto start = std::chrono::steady_clock::now();
    std::optional<SparsifierResult> result;
    bool certified = false;
    int attempts = 0;
    if (args.verify_retry <= 0) {
        cfg.seed = base_seed;
        result = sparsify(g, cfg);
        attempts = 1;
    } else {
        for (int a = 0; a < args.verify_retry; ++a) {
            cfg.seed = base_seed + static_cast<std::uint64_t>(a);
            result = sparsify(g, cfg);
            ++attempts;
            const auto [lo, hi] = spectral_bounds(g, result->graph);
            if (lo >= 1.0 - args.epsilon - 1e-12 && hi <= 1.0 + args.epsilon + 1e-12) {
                certified = true;
                break;
            }
        }
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    OutputTarget out(args.output);
    write_graph(out.stream(), result->graph);
    out.finish();

    std::cerr << "seed_used: " << cfg.seed << "\n";
    std::cerr << "mode: " << args.mode << "\n";
    std::cerr << "q: " << result->q_used << "\n";
    std::cerr << "distinct_edges: " << result->distinct_edges << "\n";
    std::cerr << "wall_time_s: " << fmt17(wall) << "\n";
    if (args.verify_retry > 0) {
        std::cerr << "attempts: " << attempts << "\n";
        std::cerr << "certified: " << (certified ? "true" : "false") << "\n";
        if (!certified) {
            std::cerr << "verification failed after " << attempts
                      << " attempts; wrote the last sample anyway\n";
            return kExitVerification;
        }
    }
    return kExitOk;
}

struct ResistancesArgs {
    std::string input;
    std::string output;
    double epsilon = 0.5;
    std::optional<double> delta;
    std::optional<std::uint64_t> seed;
    bool exact = false;
    bool all_edges = false;
    std::string pairs_path;
    std::string oracle_in;
    std::string oracle_out;
};

std::vector<std::pair<Vertex, Vertex>> load_pairs(const std::string& path, std::uint32_t n) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::vector<std::pair<Vertex, Vertex>> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        unsigned long long u = 0, v = 0;
        if (!(fields >> u)) continue; // blank or comment
        std::string extra;
        if (!(fields >> v) || (fields >> extra)) {
            throw ParseError(path + " line " + std::to_string(line_no) + ": expected 'u v'");
        }
        if (u >= n || v >= n) {
            throw ParseError(path + " line " + std::to_string(line_no) +
                             ": vertex id outside n=" + std::to_string(n));
        }
        pairs.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    return pairs;
}

int run_resistances(const ResistancesArgs& args) {
    const WeightedGraph g = load_graph_file(args.input);
    if (!args.all_edges && args.pairs_path.empty() && args.oracle_out.empty()) {
        std::cerr << "error: nothing to do; pass --all-edges, --pairs, or --oracle-out\n";
        return kExitUsage;
    }

    OutputTarget out(args.output);
    auto emit = [&](Vertex u, Vertex v, double r) {
        out.stream() << u << " " << v << " " << fmt17(r) << "\n";
    };

    if (args.exact) {
        const ExactResistances exact(g);
        if (args.all_edges) {
            for (const Edge& e : g.edges()) emit(e.u, e.v, exact.query(e.u, e.v));
        }
        if (!args.pairs_path.empty()) {
            for (const auto& [u, v] : load_pairs(args.pairs_path, g.n())) {
                emit(u, v, exact.query(u, v));
            }
        }
        out.finish();
        return kExitOk;
    }

    ResistanceOracle oracle;
    if (!args.oracle_in.empty()) {
        oracle = load_oracle_file(args.oracle_in);
        if (oracle.n != g.n()) {
            throw PreconditionError("oracle dump has n=" + std::to_string(oracle.n) +
                                    " but the graph has n=" + std::to_string(g.n()));
        }
    } else {
        OracleBuildOptions opts;
        opts.epsilon = args.epsilon;
        opts.delta = args.delta;
        oracle = build_oracle(g, opts, resolve_seed(args.seed));
    }
    if (!args.oracle_out.empty()) save_oracle_file(oracle, args.oracle_out);

    if (args.all_edges) {
        for (const Edge& e : g.edges()) emit(e.u, e.v, oracle.query(e.u, e.v));
    }
    if (!args.pairs_path.empty()) {
        for (const auto& [u, v] : load_pairs(args.pairs_path, g.n())) {
            emit(u, v, oracle.query(u, v));
        }
    }
    out.finish();
    return kExitOk;
}

struct VerifyArgs {
    std::string input;
    std::string sparsifier;
    double epsilon = 0.5;
    int trials = 1000;
    int resistance_pairs = 20;
    std::optional<std::uint64_t> seed;
    std::string json_path;
};

int run_verify(const VerifyArgs& args) {
    const WeightedGraph g = load_graph_file(args.input);
    const WeightedGraph h = load_graph_file(args.sparsifier);
    const VerificationReport rep = verify_sparsifier(g, h, args.epsilon, args.trials,
                                                     args.resistance_pairs,
                                                     resolve_seed(args.seed));
    std::cout << report_to_kv(rep);
    if (!args.json_path.empty()) {
        std::ofstream out(args.json_path);
        if (!out) throw ParseError("cannot open '" + args.json_path + "' for writing");
        out << report_to_json(rep);
        out.flush();
        if (!out) throw ParseError("write failure on '" + args.json_path + "'");
    }
    return rep.pass ? kExitOk : kExitVerification;
}

int run_stats(const std::string& input) {
    const WeightedGraph g = load_graph_file(input);
    std::cout << "n=" << g.n() << "\n";
    std::cout << "m=" << g.m() << "\n";
    if (g.m() > 0) {
        std::cout << "w_min=" << fmt17(g.min_weight()) << "\n";
        std::cout << "w_max=" << fmt17(g.max_weight()) << "\n";
        std::cout << "weight_ratio=" << fmt17(g.weight_ratio()) << "\n";
    }
    std::cout << "connected=" << (is_connected(g) ? "true" : "false") << "\n";
    return kExitOk;
}

int run_pi_check(const std::string& input) {
    const WeightedGraph g = load_graph_file(input);
    const PiCheckReport rep = pi_check_details(g);
    std::cout << "idempotency_error=" << fmt17(rep.idempotency_error) << "\n";
    std::cout << "trace_error=" << fmt17(rep.trace_error) << "\n";
    std::cout << "diag_resistance_error=" << fmt17(rep.diag_resistance_error) << "\n";
    std::cout << "column_norm_error=" << fmt17(rep.column_norm_error) << "\n";
    std::cout << "pass=" << (rep.pass ? "true" : "false") << "\n";
    return rep.pass ? kExitOk : kExitVerification;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral graph sparsification by effective-resistance sampling"};
    app.require_subcommand(1);

    SparsifyArgs sparsify_args;
    CLI::App* cmd_sparsify = app.add_subcommand(
        "sparsify", "sample a spectral sparsifier of a weighted graph");
    cmd_sparsify->add_option("--input", sparsify_args.input, "input edge list")->required();
    cmd_sparsify->add_option("--output", sparsify_args.output,
                             "output edge list (default: stdout)");
    cmd_sparsify->add_option("--epsilon", sparsify_args.epsilon, "target accuracy");
    cmd_sparsify->add_option("--seed", sparsify_args.seed, "RNG seed (default: entropy)");
    cmd_sparsify->add_option("--q", sparsify_args.q, "number of samples (default: formula)");
    cmd_sparsify->add_option("--c0", sparsify_args.c0, "sample-count constant");
    cmd_sparsify->add_option("--delta", sparsify_args.delta,
                             "resistance-oracle solve tolerance override");
    cmd_sparsify->add_option("--mode", sparsify_args.mode, "sampling rule")
        ->check(CLI::IsMember({"resistance", "degree-bounded"}));
    cmd_sparsify->add_flag("--exact", sparsify_args.exact,
                           "use dense exact resistances instead of the sketch oracle");
    cmd_sparsify->add_option("--verify-retry", sparsify_args.verify_retry,
                             "re-sample up to N times until spectrally certified");

    ResistancesArgs res_args;
    CLI::App* cmd_res = app.add_subcommand("resistances",
                                           "compute effective resistances");
    cmd_res->add_option("--input", res_args.input, "input edge list")->required();
    cmd_res->add_option("--output", res_args.output, "output file (default: stdout)");
    cmd_res->add_option("--epsilon", res_args.epsilon, "oracle accuracy");
    cmd_res->add_option("--delta", res_args.delta, "oracle solve tolerance override");
    cmd_res->add_option("--seed", res_args.seed, "RNG seed (default: entropy)");
    CLI::Option* opt_exact =
        cmd_res->add_flag("--exact", res_args.exact, "dense exact resistances");
    cmd_res->add_flag("--all-edges", res_args.all_edges, "emit one line per edge");
    cmd_res->add_option("--pairs", res_args.pairs_path, "file of 'u v' pairs to query");
    CLI::Option* opt_oin =
        cmd_res->add_option("--oracle-in", res_args.oracle_in, "reuse a saved oracle dump");
    CLI::Option* opt_oout =
        cmd_res->add_option("--oracle-out", res_args.oracle_out, "save the oracle dump");
    opt_exact->excludes(opt_oin);
    opt_exact->excludes(opt_oout);

    VerifyArgs verify_args;
    CLI::App* cmd_verify = app.add_subcommand("verify",
                                              "verify a sparsifier against its base graph");
    cmd_verify->add_option("--input", verify_args.input, "base graph edge list")->required();
    cmd_verify->add_option("--sparsifier", verify_args.sparsifier, "sparsifier edge list")
        ->required();
    cmd_verify->add_option("--epsilon", verify_args.epsilon, "accuracy to certify");
    cmd_verify->add_option("--trials", verify_args.trials, "random cut trials");
    cmd_verify->add_option("--resistance-pairs", verify_args.resistance_pairs,
                           "random vertex pairs for the resistance ratio");
    cmd_verify->add_option("--seed", verify_args.seed, "RNG seed (default: entropy)");
    cmd_verify->add_option("--json", verify_args.json_path, "also write a JSON report");

    std::string stats_input;
    CLI::App* cmd_stats = app.add_subcommand("stats", "print edge-list statistics");
    cmd_stats->add_option("--input", stats_input, "input edge list")->required();

    std::string pi_input;
    CLI::App* cmd_pi = app.add_subcommand(
        "pi-check", "structural checks on the resistance projection matrix");
    cmd_pi->add_option("--input", pi_input, "input edge list")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cmd_sparsify->parsed()) return run_sparsify(sparsify_args);
        if (cmd_res->parsed()) return run_resistances(res_args);
        if (cmd_verify->parsed()) return run_verify(verify_args);
        if (cmd_stats->parsed()) return run_stats(stats_input);
        if (cmd_pi->parsed()) return run_pi_check(pi_input);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const SolveError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    }
    return kExitUsage;
}
