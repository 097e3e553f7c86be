// addrep — command-line front end.
//
// Subcommands: gen, scan, extract, verify, walk, bounds, patch. Outputs are
// JSON by default (--format text for a human rendering); every run echoes
// its effective configuration. Exit codes: 0 success, 2 input/contract
// error, 3 expected mathematical negative (hypothesis violation, no gap,
// inconclusive bound), 4 internal invariant breach.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "addrep/bounds.hpp"
#include "addrep/extract.hpp"
#include "addrep/json_io.hpp"
#include "addrep/numset.hpp"
#include "addrep/walkgraph.hpp"

using nlohmann::json;

namespace {

struct Options {
    std::string command;
    std::string family;
    std::string input;
    std::string trace_path;
    std::string out;
    std::string format = "json";
    std::optional<std::uint64_t> horizon;
    std::uint64_t seed = 0;
    std::uint64_t x = 0;
    std::uint64_t n0 = 1;
    std::optional<std::uint64_t> a0;
    std::optional<std::uint64_t> block_cap;
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::optional<std::uint64_t> scan_lo;
    std::optional<std::uint64_t> scan_hi;
    double nrs_c = 1.0;
    std::uint64_t max_rounds = 10;
    bool oracle = false;
};

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) addrep::fail(addrep::ErrorKind::IoError, "cannot open " + tmp);
        out << content;
        if (!out) addrep::fail(addrep::ErrorKind::IoError, "write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        addrep::fail(addrep::ErrorKind::IoError, "cannot rename " + tmp + " to " + path);
    }
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content;
    else
        atomic_write(out_path, content);
}

json base_config(const Options& opt) {
    json config{{"command", opt.command},
                {"format", opt.format},
                {"out", opt.out.empty() ? json(nullptr) : json(opt.out)},
                {"threads", addrep::worker_count()}};
    return config;
}

std::string render_json(const json& payload, const json& config) {
    json doc = payload;
    doc["config"] = config;
    return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) addrep::fail(addrep::ErrorKind::IoError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_file(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        addrep::fail(addrep::ErrorKind::MalformedInput,
                     "cannot parse JSON from " + path + ": " + e.what());
    }
}

// ---- text renderings ------------------------------------------------------

std::string text_header(const json& config) {
    return "config " + config.dump() + "\n";
}

std::string render_scan_text(const addrep::RepCountWindow& w) {
    std::ostringstream ss;
    ss << "window [" << w.n_lo << ", " << w.n_hi << "]\n";
    ss << "exceptional (r = 1): " << w.exceptional.size();
    if (!w.exceptional.empty()) {
        ss << " at";
        std::size_t shown = 0;
        for (std::uint64_t n : w.exceptional) {
            ss << " " << n;
            if (++shown == 20 && w.exceptional.size() > 20) {
                ss << " ...";
                break;
            }
        }
    }
    ss << "\nzero_count (r = 0): " << w.zero_count << "\n";
    ss << "inferred n0: " << w.inferred_n0 << " (exact within the scanned window only)\n";
    return ss.str();
}

std::string render_trace_text(const addrep::ExtractionTrace& t, const addrep::RepPairTable& table) {
    std::ostringstream ss;
    ss << "x = " << t.x << ", m = " << t.m() << ", threshold x/(ln x)^2 = " << t.threshold()
       << "\n";
    ss << "regime: |A(x)| = " << t.regime.count << " vs (ln x/ln ln x)^2 = " << t.regime.bound
       << (t.regime.within ? " (within)" : " (exceeded)") << "\n";
    for (std::size_t k = 0; k < t.m(); ++k)
        ss << "  step " << k + 1 << ": b = " << t.b[k] << ", a = " << t.a[k]
           << ", blocks = " << t.steps[k].blocks << ", |(b, a+b] ∩ A| = " << t.steps[k].count
           << "\n";
    std::size_t violations = table.violation_count();
    ss << "pairs: " << table.entries.size() << " (" << violations << " violations)\n";
    for (const auto& e : table.entries) {
        if (e.pair)
            ss << "  (" << e.i << "," << e.j << "): c = " << e.pair->c << ", d = " << e.pair->d
               << "\n";
        else
            ss << "  (" << e.i << "," << e.j << "): VIOLATION r(A, " << e.n << ") = 1\n";
    }
    return ss.str();
}

std::string render_verify_text(const addrep::VerifyReport& r) {
    std::ostringstream ss;
    auto line = [&](bool pass, const std::string& what) {
        ss << (pass ? "  [pass] " : "  [FAIL] ") << what << "\n";
    };
    ss << "verify x = " << r.x << ", m = " << r.m << "\n";
    line(r.replay.empty(), "trace replay");
    for (const auto& f : r.replay) ss << "         " << f << "\n";
    line(r.growth.all_pass(), "growth (a_{k+1} > 3 a_k, a_k > 3 b_k)");
    for (const auto& row : r.step_counts.rows)
        line(row.meets_k && row.meets_gap_bound,
             "step count k = " + std::to_string(row.k) + ": |(b,a+b] ∩ A| = " +
                 std::to_string(row.count) + (row.meets_k ? " >= " : " < ") +
                 std::to_string(row.k));
    line(r.step_counts.total_ok, "|A(x)| = " + std::to_string(r.step_counts.count_x) +
                                     " >= m(m+1)/2 = " + std::to_string(r.step_counts.required_total));
    {
        std::ostringstream amgm;
        amgm << "amgm chain: count " << r.amgm.count_x << " >= sum " << r.amgm.sum_terms
             << " >= bound " << r.amgm.amgm;
        line(r.amgm.all_pass(), amgm.str());
    }
    for (const auto& p : r.per_k) {
        if (!p.containments) {
            line(false, "index k = " + std::to_string(p.k) + ": pairs incomplete (violations)");
            continue;
        }
        line(p.containments->all_pass(), "containments and walk bound at k = " + std::to_string(p.k));
    }
    ss << "pairs: " << r.pair_total << " total, " << r.pair_violations << " violations\n";
    for (const auto& e : r.errors) ss << "  [FAIL] " << e << "\n";
    ss << (r.all_pass ? "ALL CHECKS PASS\n" : "CHECKS FAILED\n");
    return ss.str();
}

std::string render_verdict_text(const addrep::WalkVerdict& v) {
    std::ostringstream ss;
    if (v.even_walk_found()) {
        ss << "even closed walk of length " << v.walk->length() << ":";
        for (std::size_t i = 0; i < v.walk->edges.size(); ++i)
            ss << " " << v.walk->vertices[i] << " -e" << v.walk->edges[i] << "-";
        ss << " " << v.walk->vertices[0] << "\n";
    } else {
        ss << "no nontrivial even closed walk\n";
    }
    for (const auto& c : v.components)
        ss << "  component: v = " << c.vertex_count << ", e = " << c.edge_count
           << ", excess = " << c.excess << ", parity = " << addrep::cycle_parity_name(c.parity)
           << "\n";
    return ss.str();
}

std::string render_bounds_text(const addrep::BoundReport& r) {
    std::ostringstream ss;
    ss << "x = " << r.x << ", |A(x)| = " << r.count << " (natural log)\n";
    ss << "  thm1 = " << r.thm1 << "\n";
    ss << "  nrs(c = " << r.nrs_c << ") = " << r.nrs << "\n";
    ss << "  bp = " << r.bp << "\n";
    ss << "  limsup_stat = " << r.limsup_stat << "\n";
    ss << "verdict: " << addrep::bound_verdict_name(r.verdict) << "\n";
    if (r.hypothesis)
        ss << "hypothesis scan: " << r.hypothesis->exceptional.size() << " exceptional in ["
           << r.hypothesis->n_lo << ", " << r.hypothesis->n_hi << "]\n";
    return ss.str();
}

// ---- commands -------------------------------------------------------------

int cmd_gen(const Options& opt) {
    bool is_from_file = opt.family.rfind("from_file", 0) == 0;
    if (!opt.horizon && !is_from_file)
        addrep::fail(addrep::ErrorKind::DomainError,
                     "--horizon is required for family '" + opt.family + "'");
    addrep::NaturalSet set =
        addrep::generate(opt.family, opt.horizon.value_or(0), opt.seed);
    json config = base_config(opt);
    config["family"] = opt.family;
    config["horizon"] = set.horizon();
    config["seed"] = opt.seed;
    std::ostringstream ss;
    ss << "# horizon=" << set.horizon() << "\n";
    ss << "# config " << config.dump() << "\n";
    for (std::uint64_t v : set.elements()) ss << v << "\n";
    emit(ss.str(), opt.out);
    return 0;
}

int cmd_scan(const Options& opt) {
    addrep::NaturalSet set = addrep::NaturalSet::from_file(opt.input);
    addrep::RepCountWindow window = addrep::scan_hypothesis(set, opt.lo, opt.hi);
    json config = base_config(opt);
    config["input"] = opt.input;
    config["lo"] = opt.lo;
    config["hi"] = opt.hi;
    if (opt.format == "text")
        emit(text_header(config) + render_scan_text(window), opt.out);
    else
        emit(render_json(addrep::to_json(window), config), opt.out);
    return 0;
}

int cmd_extract(const Options& opt) {
    addrep::NaturalSet set = addrep::NaturalSet::from_file(opt.input);
    addrep::ExtractOptions eopt;
    eopt.a0 = opt.a0;
    eopt.n0 = opt.n0;
    eopt.block_cap = opt.block_cap;
    addrep::ExtractionTrace trace = addrep::run_extraction(set, opt.x, eopt);
    addrep::RepPairTable table = addrep::build_rep_table(set, trace);
    json config = base_config(opt);
    config["input"] = opt.input;
    config["x"] = opt.x;
    config["n0"] = opt.n0;
    config["a0"] = opt.a0 ? json(*opt.a0) : json(nullptr);
    config["block_cap"] = opt.block_cap ? json(*opt.block_cap) : json(nullptr);
    if (opt.format == "text")
        emit(text_header(config) + render_trace_text(trace, table), opt.out);
    else
        emit(render_json(addrep::to_json(trace, table), config), opt.out);
    return 0;
}

int cmd_verify(const Options& opt) {
    addrep::NaturalSet set = addrep::NaturalSet::from_file(opt.input);
    auto [trace, table] = addrep::trace_from_json(parse_json_file(opt.trace_path));
    addrep::VerifyReport report = addrep::full_verification(set, trace, table);
    json config = base_config(opt);
    config["input"] = opt.input;
    config["trace"] = opt.trace_path;
    if (opt.format == "text")
        emit(text_header(config) + render_verify_text(report), opt.out);
    else
        emit(render_json(addrep::to_json(report), config), opt.out);
    return report.all_pass ? 0 : 3;
}

int cmd_walk(const Options& opt) {
    std::string content = read_file(opt.input);
    std::size_t first = content.find_first_not_of(" \t\r\n");
    addrep::MultiGraph graph;
    if (first != std::string::npos && content[first] == '{') {
        graph = addrep::graph_from_json(parse_json_file(opt.input));
    } else {
        std::istringstream ss(content);
        graph = addrep::MultiGraph::from_text(ss);
    }
    addrep::WalkVerdict verdict = addrep::detect_even_closed_walk(graph);
    json payload = addrep::to_json(verdict);
    json config = base_config(opt);
    config["input"] = opt.input;
    config["oracle"] = opt.oracle;
    std::string oracle_text;
    if (opt.oracle) {
        std::optional<addrep::Walk> witness;
        if (graph.edge_count() > 0)
            witness = addrep::brute_force_even_walk(graph, 2 * graph.edge_count());
        bool agrees = witness.has_value() == verdict.even_walk_found();
        payload["oracle"] = json{{"found", witness.has_value()}, {"agrees", agrees}};
        oracle_text = std::string("oracle: ") + (witness ? "found" : "none") +
                      (agrees ? " (agrees)\n" : " (DISAGREES)\n");
        if (!agrees)
            addrep::fail(addrep::ErrorKind::Internal,
                         "detector and brute-force oracle disagree on " + opt.input);
    }
    if (opt.format == "text")
        emit(text_header(config) + render_verdict_text(verdict) + oracle_text, opt.out);
    else
        emit(render_json(payload, config), opt.out);
    return 0;
}

int cmd_bounds(const Options& opt) {
    addrep::NaturalSet set = addrep::NaturalSet::from_file(opt.input);
    if (opt.scan_lo.has_value() != opt.scan_hi.has_value())
        addrep::fail(addrep::ErrorKind::DomainError,
                     "--scan-lo and --scan-hi must be given together");
    std::optional<std::pair<std::uint64_t, std::uint64_t>> window;
    if (opt.scan_lo) window = {*opt.scan_lo, *opt.scan_hi};
    addrep::BoundReport report = addrep::bound_report(set, opt.x, opt.nrs_c, window);
    json config = base_config(opt);
    config["input"] = opt.input;
    config["x"] = opt.x;
    config["nrs_c"] = opt.nrs_c;
    config["scan_lo"] = opt.scan_lo ? json(*opt.scan_lo) : json(nullptr);
    config["scan_hi"] = opt.scan_hi ? json(*opt.scan_hi) : json(nullptr);
    if (opt.format == "text")
        emit(text_header(config) + render_bounds_text(report), opt.out);
    else
        emit(render_json(addrep::to_json(report), config), opt.out);
    return report.verdict == addrep::BoundVerdict::consistent ? 0 : 3;
}

int cmd_patch(const Options& opt) {
    addrep::NaturalSet set = addrep::NaturalSet::from_file(opt.input);
    addrep::ExtractOptions eopt;
    eopt.a0 = opt.a0;
    eopt.n0 = opt.n0;
    eopt.block_cap = opt.block_cap;
    addrep::PatchResult result = addrep::patch_for_hypothesis(set, opt.x, opt.max_rounds, eopt);
    json insertions = json::array();
    for (const auto& ins : result.insertions)
        insertions.push_back(json{{"round", ins.round},
                                  {"i", ins.i},
                                  {"j", ins.j},
                                  {"n", ins.n},
                                  {"c", ins.c},
                                  {"d", ins.d}});
    json payload{{"rounds", result.rounds},
                 {"insertions", insertions},
                 {"size", result.set.size()},
                 {"trace", addrep::to_json(result.trace, result.table)}};
    json config = base_config(opt);
    config["input"] = opt.input;
    config["x"] = opt.x;
    config["max_rounds"] = opt.max_rounds;
    if (!opt.out.empty()) {
        std::ostringstream ss;
        result.set.write(ss);
        emit(ss.str(), opt.out);
        payload["set_written_to"] = opt.out;
        std::cout << render_json(payload, config);
    } else if (opt.format == "text") {
        std::ostringstream ss;
        ss << "converged after " << result.rounds << " insertion rounds, "
           << result.insertions.size() << " insertions, |A| = " << result.set.size() << "\n";
        emit(text_header(config) + ss.str(), "");
    } else {
        emit(render_json(payload, config), "");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"addrep: representation-function toolkit — gap extraction, closed-walk "
                 "certificates, counting-bound reports"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", opt.format, "Output format: json|text")
            ->check(CLI::IsMember({"json", "text"}));
        cmd->add_option("--out", opt.out, "Output file (atomic write); stdout when absent");
    };

    auto* gen = app.add_subcommand("gen", "Generate a set file from a family spec");
    gen->add_option("family", opt.family,
                    "evens | all | powers(b) | ap(s,d) | random(e) | from_file(path)")
        ->required();
    gen->add_option("--horizon", opt.horizon, "Exactness horizon H");
    gen->add_option("--seed", opt.seed, "RNG seed for random(e)");
    add_common(gen);

    auto* scan = app.add_subcommand("scan", "Scan a window for n with r(A,n) = 1");
    scan->add_option("--input", opt.input, "Set file")->required();
    scan->add_option("--lo", opt.lo, "Window start")->required();
    scan->add_option("--hi", opt.hi, "Window end (inclusive)")->required();
    add_common(scan);

    auto* extract = app.add_subcommand("extract", "Run the gap-extraction pipeline at x");
    extract->add_option("--input", opt.input, "Set file")->required();
    extract->add_option("--x", opt.x, "Analysis point (>= 16)")->required();
    extract->add_option("--n0", opt.n0, "Start threshold: b_1 = least element >= n0");
    extract->add_option("--a0", opt.a0, "Explicit start element (must be in the set)");
    extract->add_option("--block-cap", opt.block_cap, "Block-scan cap (default |A(x)|+1)");
    add_common(extract);

    auto* verify = app.add_subcommand("verify", "Re-verify a trace document against a set");
    verify->add_option("--trace", opt.trace_path, "Trace JSON from 'extract'")->required();
    verify->add_option("--input", opt.input, "Set file")->required();
    add_common(verify);

    auto* walk = app.add_subcommand("walk", "Decide nontrivial even closed walk existence");
    walk->add_option("--input", opt.input, "Graph file ('V E' text or JSON)")->required();
    walk->add_flag("--oracle", opt.oracle, "Cross-check with the brute-force oracle");
    add_common(walk);

    auto* bounds = app.add_subcommand("bounds", "Evaluate counting bounds at x");
    bounds->add_option("--input", opt.input, "Set file")->required();
    bounds->add_option("--x", opt.x, "Evaluation point (>= 16)")->required();
    bounds->add_option("--nrs-c", opt.nrs_c, "Constant for the nrs upper bound (default 1)");
    bounds->add_option("--scan-lo", opt.scan_lo, "Attach a hypothesis scan: window start");
    bounds->add_option("--scan-hi", opt.scan_hi, "Attach a hypothesis scan: window end");
    add_common(bounds);

    auto* patch = app.add_subcommand("patch", "Insert representations until pair sums verify");
    patch->add_option("--input", opt.input, "Set file")->required();
    patch->add_option("--x", opt.x, "Analysis point (>= 16)")->required();
    patch->add_option("--max-rounds", opt.max_rounds, "Round cap (default 10)");
    patch->add_option("--n0", opt.n0, "Start threshold for extraction");
    add_common(patch);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    for (auto* cmd : {gen, scan, extract, verify, walk, bounds, patch})
        if (cmd->parsed()) opt.command = cmd->get_name();

    try {
        if (gen->parsed()) return cmd_gen(opt);
        if (scan->parsed()) return cmd_scan(opt);
        if (extract->parsed()) return cmd_extract(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (walk->parsed()) return cmd_walk(opt);
        if (bounds->parsed()) return cmd_bounds(opt);
        if (patch->parsed()) return cmd_patch(opt);
    } catch (const addrep::Error& e) {
        json config = base_config(opt);
        json doc{{"error", json{{"kind", addrep::error_kind_name(e.kind())},
                                {"message", e.what()}}},
                 {"config", config}};
        if (opt.format == "text")
            std::cout << "error: " << e.what() << "\n";
        else
            std::cout << doc.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return addrep::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
