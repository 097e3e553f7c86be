#include "addrep/json_io.hpp"

namespace addrep {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) {
    fail(ErrorKind::MalformedInput, "json: " + what);
}

template <typename T>
T get_field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        bad(std::string("field '") + key + "' has the wrong type");
    }
}

} // namespace

json to_json(const RepCountWindow& window) {
    return json{{"n_lo", window.n_lo},
                {"n_hi", window.n_hi},
                {"exceptional", window.exceptional},
                {"zero_count", window.zero_count},
                {"inferred_n0", window.inferred_n0},
                {"caveat", "exact within the scanned window only"}};
}

json to_json(const ExtractionTrace& trace, const RepPairTable& table) {
    json steps = json::array();
    for (std::size_t k = 0; k < trace.steps.size(); ++k)
        steps.push_back(json{{"k", k + 1},
                             {"blocks", trace.steps[k].blocks},
                             {"count", trace.steps[k].count}});
    json pairs = json::array();
    for (const auto& e : table.entries) {
        if (e.pair)
            pairs.push_back(json{{"i", e.i}, {"j", e.j}, {"c", e.pair->c}, {"d", e.pair->d}});
        else
            pairs.push_back(json{{"i", e.i}, {"j", e.j}, {"violation", true}, {"n", e.n}});
    }
    return json{{"x", trace.x},
                {"m", trace.m()},
                {"a", trace.a},
                {"b", trace.b},
                {"steps", steps},
                {"pairs", pairs},
                {"checks",
                 json{{"regime", json{{"count", trace.regime.count},
                                      {"bound", trace.regime.bound},
                                      {"within", trace.regime.within}}},
                      {"threshold", trace.threshold()},
                      {"log", "natural"}}}};
}

std::pair<ExtractionTrace, RepPairTable> trace_from_json(const json& j) {
    ExtractionTrace trace;
    trace.x = get_field<std::uint64_t>(j, "x");
    trace.a = get_field<std::vector<std::uint64_t>>(j, "a");
    trace.b = get_field<std::vector<std::uint64_t>>(j, "b");
    auto m = get_field<std::size_t>(j, "m");
    if (m != trace.a.size()) bad("m does not match the length of a");
    auto steps = get_field<json>(j, "steps");
    if (!steps.is_array()) bad("steps must be an array");
    for (const auto& s : steps)
        trace.steps.push_back(StepRecord{get_field<std::uint64_t>(s, "blocks"),
                                         get_field<std::uint64_t>(s, "count")});
    if (j.contains("checks") && j.at("checks").contains("regime")) {
        const auto& r = j.at("checks").at("regime");
        trace.regime.count = get_field<std::uint64_t>(r, "count");
        trace.regime.bound = get_field<double>(r, "bound");
        trace.regime.within = get_field<bool>(r, "within");
    }

    RepPairTable table;
    table.m = m;
    auto pairs = get_field<json>(j, "pairs");
    if (!pairs.is_array()) bad("pairs must be an array");
    for (const auto& p : pairs) {
        PairEntry entry;
        entry.i = get_field<std::size_t>(p, "i");
        entry.j = get_field<std::size_t>(p, "j");
        if (entry.i < 1 || entry.j <= entry.i || entry.j > m) bad("pair indices out of range");
        if (p.contains("violation") && p.at("violation").get<bool>()) {
            entry.n = get_field<std::uint64_t>(p, "n");
        } else {
            entry.pair = RepPair{get_field<std::uint64_t>(p, "c"),
                                 get_field<std::uint64_t>(p, "d")};
            entry.n = entry.pair->c + entry.pair->d;
        }
        table.entries.push_back(entry);
    }
    return {std::move(trace), std::move(table)};
}

json to_json(const WalkVerdict& verdict) {
    json components = json::array();
    for (const auto& c : verdict.components)
        components.push_back(json{{"v", c.vertex_count},
                                  {"e", c.edge_count},
                                  {"excess", c.excess},
                                  {"parity", cycle_parity_name(c.parity)}});
    json walk;
    if (verdict.walk) {
        walk = json::array();
        for (std::size_t i = 0; i < verdict.walk->edges.size(); ++i) {
            walk.push_back(verdict.walk->vertices[i]);
            walk.push_back(verdict.walk->edges[i]);
        }
    }
    return json{{"verdict", verdict.even_walk_found() ? "even_walk" : "none"},
                {"walk", verdict.walk ? walk : json(nullptr)},
                {"components", components}};
}

json to_json(const BoundReport& report) {
    json j{{"x", report.x},
           {"count", report.count},
           {"thm1", report.thm1},
           {"nrs", json{{"c", report.nrs_c}, {"value", report.nrs}}},
           {"bp", report.bp},
           {"limsup_stat", report.limsup_stat},
           {"verdict", bound_verdict_name(report.verdict)},
           {"log", "natural"},
           {"hypothesis", nullptr}};
    if (report.hypothesis) j["hypothesis"] = to_json(*report.hypothesis);
    return j;
}

namespace {

json to_json(const CheckItem& item) {
    return json{{"name", item.name}, {"pass", item.pass}, {"detail", item.detail}};
}

json to_json(const EdgeBoundReport& report) {
    return json{{"verdict", to_json(report.verdict)},
                {"vertices", report.vertices},
                {"edges", report.edges},
                {"bound_checked", report.bound_checked},
                {"bound_holds", report.bound_holds}};
}

} // namespace

json to_json(const VerifyReport& report) {
    json growth = json::array();
    for (const auto& c : report.growth.checks) growth.push_back(to_json(c));

    json rows = json::array();
    for (const auto& r : report.step_counts.rows)
        rows.push_back(json{{"k", r.k},
                            {"count", r.count},
                            {"meets_k", r.meets_k},
                            {"meets_gap_bound", r.meets_gap_bound}});

    json per_k = json::array();
    for (const auto& p : report.per_k) {
        json entry{{"k", p.k}, {"pairs_complete", p.pairs_complete}};
        if (p.containments) {
            json checks = json::array();
            for (const auto& c : p.containments->checks) checks.push_back(to_json(c));
            entry["containments"] = checks;
            entry["walk_bound"] =
                p.containments->edge_bound ? to_json(*p.containments->edge_bound) : json(nullptr);
        } else {
            entry["containments"] = nullptr;
            entry["walk_bound"] = nullptr;
        }
        per_k.push_back(entry);
    }

    return json{{"x", report.x},
                {"m", report.m},
                {"replay", report.replay},
                {"growth", json{{"checks", growth}, {"all_pass", report.growth.all_pass()}}},
                {"step_counts", json{{"rows", rows},
                                     {"count_x", report.step_counts.count_x},
                                     {"required_total", report.step_counts.required_total},
                                     {"total_ok", report.step_counts.total_ok},
                                     {"all_pass", report.step_counts.all_pass()}}},
                {"amgm", json{{"count_x", report.amgm.count_x},
                              {"sum_terms", report.amgm.sum_terms},
                              {"intermediate", report.amgm.intermediate},
                              {"amgm", report.amgm.amgm},
                              {"count_ge_sum", report.amgm.count_ge_sum},
                              {"sum_ge_intermediate", report.amgm.sum_ge_intermediate},
                              {"intermediate_ge_amgm", report.amgm.intermediate_ge_amgm},
                              {"all_pass", report.amgm.all_pass()}}},
                {"per_k", per_k},
                {"pairs", json{{"total", report.pair_total},
                               {"violations", report.pair_violations}}},
                {"errors", report.errors},
                {"all_pass", report.all_pass}};
}

MultiGraph graph_from_json(const json& j) {
    auto vertices = get_field<std::vector<std::uint64_t>>(j, "vertices");
    auto edges_json = get_field<json>(j, "edges");
    if (!edges_json.is_array()) bad("edges must be an array of [u, v] pairs");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
    for (const auto& e : edges_json) {
        if (!e.is_array() || e.size() != 2) bad("edges must be an array of [u, v] pairs");
        edges.emplace_back(e.at(0).get<std::uint64_t>(), e.at(1).get<std::uint64_t>());
    }
    try {
        return MultiGraph(std::move(vertices), std::move(edges));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InconsistentInput) bad(e.what());
        throw;
    }
}

} // namespace addrep
