#include "addrep/extract.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace addrep {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr double kRelTol = 1e-9;

bool ge_with_rtol(double lhs, double rhs) {
    double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    return lhs >= rhs - kRelTol * scale;
}

double threshold_of(u64 x) {
    double l = std::log(static_cast<double>(x));
    return static_cast<double>(x) / (l * l);
}

} // namespace

double ExtractionTrace::threshold() const { return threshold_of(x); }

GapStepResult gap_step(const NaturalSet& set, u64 b, u64 x,
                       std::optional<u64> block_cap) {
    if (b < 1) fail(ErrorKind::DomainError, "gap step requires b >= 1");
    u64 cap = block_cap ? *block_cap : set.count_leq(x) + 1;

    auto block_hi = [&](u64 i) -> u64 {
        // upper end of block (i*b, (i+1)*b]
        u128 hi = static_cast<u128>(i + 1) * b;
        if (hi > set.horizon())
            fail(ErrorKind::HorizonExceeded,
                 "block scan needs membership up to " + std::to_string(static_cast<u64>(
                     hi > static_cast<u128>(kMaxHorizon) ? kMaxHorizon : static_cast<u64>(hi))) +
                     " beyond horizon " + std::to_string(set.horizon()));
        return static_cast<u64>(hi);
    };

    if (!set.min_in_interval(b, block_hi(1)))
        fail(ErrorKind::DoublingFailure,
             "(b, 2b] contains no element at b = " + std::to_string(b));

    u64 k = 0;
    for (u64 i = 2; i <= cap + 1; ++i) {
        if (!set.min_in_interval(static_cast<u64>(static_cast<u128>(i) * b), block_hi(i))) {
            k = i - 1;
            break;
        }
    }
    if (k == 0)
        fail(ErrorKind::NoGapFound, "no empty block within cap " + std::to_string(cap) +
                                        " at b = " + std::to_string(b) +
                                        " (set too dense for the gap regime)");

    u64 window_lo = static_cast<u64>(static_cast<u128>(k + 1) * b);
    u64 window_hi = block_hi(2 * k + 1); // 2(k+1)b
    auto a_opt = set.min_in_interval(window_lo, window_hi);
    if (!a_opt)
        fail(ErrorKind::DoublingFailure, "doubling window (" + std::to_string(window_lo) + ", " +
                                             std::to_string(window_hi) + "] contains no element");
    u64 a = *a_opt;

    // postconditions, re-asserted on every success
    if (!(static_cast<u128>(a) > static_cast<u128>(3) * b))
        fail(ErrorKind::Internal, "gap step produced a <= 3b");
    if (set.interval_count(a - b - 1, a - 1) != 0)
        fail(ErrorKind::Internal, "gap [a-b, a) is not empty");
    u64 count = set.interval_count(b, a + b);
    if (!(static_cast<u128>(2) * b * (count + 1) >= static_cast<u128>(a) + b))
        fail(ErrorKind::Internal, "interval count below (a+b)/(2b) - 1");
    return GapStepResult{a, k, count};
}

ExtractionTrace run_extraction(const NaturalSet& set, u64 x, const ExtractOptions& options) {
    if (x < 16) fail(ErrorKind::DomainError, "extraction requires x >= 16");
    if (set.empty()) fail(ErrorKind::EmptySet, "cannot extract from an empty set");
    if (x > set.horizon())
        fail(ErrorKind::HorizonExceeded, "x = " + std::to_string(x) + " beyond horizon " +
                                             std::to_string(set.horizon()));

    u64 a0;
    if (options.a0) {
        a0 = *options.a0;
        if (a0 < 1) fail(ErrorKind::DomainError, "a0 must be >= 1");
        if (!set.contains(a0))
            fail(ErrorKind::DomainError, "a0 = " + std::to_string(a0) + " is not an element");
    } else {
        auto least = set.least_geq(std::max<u64>(options.n0, 1));
        if (!least)
            fail(ErrorKind::EmptySet,
                 "no element >= n0 = " + std::to_string(options.n0));
        a0 = *least;
    }

    ExtractionTrace trace;
    trace.x = x;
    double thr = threshold_of(x);
    if (static_cast<double>(a0) > thr)
        fail(ErrorKind::RegimeViolation, "start b_1 = " + std::to_string(a0) +
                                             " already exceeds x/(ln x)^2 = " + std::to_string(thr));

    double lx = std::log(static_cast<double>(x));
    double llx = std::log(lx);
    trace.regime.count = set.count_leq(x);
    trace.regime.bound = (lx / llx) * (lx / llx);
    trace.regime.within = static_cast<double>(trace.regime.count) <= trace.regime.bound;

    u64 b = a0;
    while (true) {
        GapStepResult step = gap_step(set, b, x, options.block_cap);
        u64 reach = step.a + b; // a,b <= 2^63 each: no overflow
        if (reach >= x)
            fail(ErrorKind::RegimeViolation,
                 "step would reach a + b = " + std::to_string(reach) + " >= x = " +
                     std::to_string(x));
        trace.a.push_back(step.a);
        trace.b.push_back(b);
        trace.steps.push_back(StepRecord{step.blocks, step.count});
        if (static_cast<double>(reach) > thr) break;
        b = reach;
        if (trace.m() > 4096)
            fail(ErrorKind::Internal, "extraction failed to terminate");
    }
    return trace;
}

std::vector<std::string> ExtractionTrace::replay_failures(const NaturalSet& set) const {
    std::vector<std::string> failures;
    auto note = [&](const std::string& msg) { failures.push_back(msg); };
    const std::size_t n = a.size();
    if (n == 0) {
        note("trace is empty");
        return failures;
    }
    if (b.size() != n || steps.size() != n) {
        note("a, b and steps have mismatched lengths");
        return failures;
    }
    if (x < 16) note("x below 16");

    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k] >= a[k + 1]) note("a sequence not strictly increasing at step " + std::to_string(k + 1));
        if (b[k] >= b[k + 1]) note("b sequence not strictly increasing at step " + std::to_string(k + 1));
        if (b[k + 1] != a[k] + b[k])
            note("recurrence b[" + std::to_string(k + 2) + "] != a[" + std::to_string(k + 1) +
                 "] + b[" + std::to_string(k + 1) + "] (expected " + std::to_string(a[k] + b[k]) +
                 ", found " + std::to_string(b[k + 1]) + ")");
    }

    for (std::size_t k = 0; k < n; ++k) {
        const std::string at = " at step " + std::to_string(k + 1);
        if (!(static_cast<u128>(a[k]) > static_cast<u128>(3) * b[k])) note("a <= 3b" + at);
        if (!(static_cast<u128>(a[k]) + b[k] < x)) note("a + b >= x" + at);
        try {
            if (b[k] < 1) {
                note("b < 1" + at);
                continue;
            }
            if (a[k] > b[k] && set.interval_count(a[k] - b[k] - 1, a[k] - 1) != 0)
                note("gap [a-b, a) not empty" + at);
            u64 cnt = set.interval_count(b[k], a[k] + b[k]);
            if (cnt != steps[k].count)
                note("stored interval count " + std::to_string(steps[k].count) +
                     " != recomputed " + std::to_string(cnt) + at);
            // block structure: blocks 1..r non-empty, block r+1 empty,
            // a = least element of the doubling window above the gap
            u64 r = steps[k].blocks;
            if (r < 1) {
                note("stored block count < 1" + at);
            } else if (static_cast<u128>(2) * (r + 1) * b[k] > set.horizon()) {
                note("block re-derivation needs membership beyond horizon" + at);
            } else {
                bool blocks_ok = true;
                for (u64 i = 1; i <= r && blocks_ok; ++i)
                    blocks_ok = set.min_in_interval(static_cast<u64>(static_cast<u128>(i) * b[k]),
                                                    static_cast<u64>(static_cast<u128>(i + 1) * b[k]))
                                    .has_value();
                if (!blocks_ok) note("a scanned block is unexpectedly empty" + at);
                if (set.min_in_interval(static_cast<u64>(static_cast<u128>(r + 1) * b[k]),
                                        static_cast<u64>(static_cast<u128>(r + 2) * b[k])))
                    note("block above the recorded scan is unexpectedly non-empty" + at);
                auto a_re = set.min_in_interval(static_cast<u64>(static_cast<u128>(r + 1) * b[k]),
                                                static_cast<u64>(static_cast<u128>(2 * (r + 1)) * b[k]));
                if (!a_re || *a_re != a[k])
                    note("a is not the least element of the doubling window" + at);
            }
        } catch (const Error& e) {
            note(std::string("replay query failed") + at + ": " + e.what());
        }
    }

    double thr = threshold();
    if (!(static_cast<double>(a[n - 1] + b[n - 1]) > thr))
        note("stopping rule violated: a_m + b_m <= x/(ln x)^2");
    if (!(static_cast<double>(b[n - 1]) <= thr))
        note("stopping rule violated: b_m > x/(ln x)^2");
    return failures;
}

std::optional<RepPair> choose_rep_pair(const NaturalSet& set, u64 a_i, u64 a_j) {
    if (!(a_i < a_j)) fail(ErrorKind::DomainError, "rep pair requires a_i < a_j");
    if (!set.contains(a_i) || !set.contains(a_j))
        fail(ErrorKind::DomainError, "rep pair endpoints must be elements");
    u64 n = a_i + a_j;
    if (n > set.horizon())
        fail(ErrorKind::HorizonExceeded, "pair sum " + std::to_string(n) + " beyond horizon " +
                                             std::to_string(set.horizon()));
    const auto& els = set.elements();
    auto end = std::upper_bound(els.begin(), els.end(), n / 2);
    for (auto it = els.begin(); it != end; ++it) {
        u64 c = *it;
        u64 d = n - c;
        if (d == a_j) continue;
        if (std::binary_search(els.begin(), els.end(), d)) return RepPair{c, d};
    }
    return std::nullopt;
}

const PairEntry& RepPairTable::at(std::size_t i, std::size_t j) const {
    for (const auto& e : entries)
        if (e.i == i && e.j == j) return e;
    fail(ErrorKind::DomainError, "no pair entry (" + std::to_string(i) + ", " +
                                     std::to_string(j) + ") in table of size m = " +
                                     std::to_string(m));
}

std::size_t RepPairTable::violation_count() const {
    std::size_t n = 0;
    for (const auto& e : entries)
        if (!e.pair) ++n;
    return n;
}

RepPairTable build_rep_table(const NaturalSet& set, const ExtractionTrace& trace) {
    RepPairTable table;
    table.m = trace.m();
    for (std::size_t i = 1; i <= table.m; ++i) {
        for (std::size_t j = i + 1; j <= table.m; ++j) {
            PairEntry entry;
            entry.i = i;
            entry.j = j;
            entry.n = trace.a[i - 1] + trace.a[j - 1];
            entry.pair = choose_rep_pair(set, trace.a[i - 1], trace.a[j - 1]);
            table.entries.push_back(entry);
        }
    }
    return table;
}

PartitionSets build_partition_sets(const ExtractionTrace& trace, const RepPairTable& table,
                                   std::size_t k) {
    if (k < 1 || k > trace.m())
        fail(ErrorKind::DomainError, "partition index k out of range 1..m");
    PartitionSets sets;
    sets.k = k;
    u64 pivot = trace.a[k - 1];
    std::set<u64> low, high;
    for (std::size_t i = 1; i < k; ++i) {
        const PairEntry& entry = table.at(i, k);
        if (!entry.pair)
            fail(ErrorKind::PairMissing, "pair (" + std::to_string(i) + ", " + std::to_string(k) +
                                             ") is a violation at n = " + std::to_string(entry.n));
        u64 c = entry.pair->c, d = entry.pair->d;
        if (d == pivot)
            fail(ErrorKind::InconsistentInput,
                 "pair (" + std::to_string(i) + ", " + std::to_string(k) +
                     ") has d equal to the pivot a_k; table was not built with the required exclusion");
        if (d < pivot) {
            sets.low_indices.push_back(i);
            sets.low_pairs.push_back(*entry.pair);
            low.insert(c);
            low.insert(d);
        } else {
            sets.high_indices.push_back(i);
            high.insert(d);
        }
    }
    sets.low_values.assign(low.begin(), low.end());
    sets.high_values.assign(high.begin(), high.end());
    return sets;
}

MultiGraph build_pair_graph(const PartitionSets& sets) {
    std::vector<std::pair<u64, u64>> edges;
    std::set<std::pair<u64, u64>> seen;
    for (const RepPair& p : sets.low_pairs) {
        auto norm = std::minmax(p.c, p.d);
        if (!seen.insert({norm.first, norm.second}).second)
            fail(ErrorKind::InconsistentInput,
                 "two low-side indices share the identical pair {" + std::to_string(p.c) + ", " +
                     std::to_string(p.d) + "} (distinct sums force distinct pairs)");
        edges.emplace_back(p.c, p.d);
    }
    MultiGraph g(sets.low_values, edges);
    if (g.edge_count() != sets.low_indices.size())
        fail(ErrorKind::Internal, "pair graph edge count mismatch");
    return g;
}

bool ContainmentReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

ContainmentReport verify_containments(const NaturalSet& set, const ExtractionTrace& trace,
                                      const PartitionSets& sets) {
    ContainmentReport report;
    report.k = sets.k;
    u64 a_k = trace.a[sets.k - 1];
    u64 b_k = trace.b[sets.k - 1];

    {
        CheckItem item{"low_values_in_open_interval", true, ""};
        for (u64 s : sets.low_values) {
            bool in_a = s <= set.horizon() && set.contains(s);
            if (!(in_a && b_k < s && s < a_k)) {
                item.pass = false;
                item.detail = "value " + std::to_string(s) + " not in A ∩ (" +
                              std::to_string(b_k) + ", " + std::to_string(a_k) + ")";
                break;
            }
        }
        if (item.pass)
            item.detail = std::to_string(sets.low_values.size()) + " values inside (" +
                          std::to_string(b_k) + ", " + std::to_string(a_k) + ")";
        report.checks.push_back(item);
    }
    {
        CheckItem item{"low_size_bound", true, ""};
        report.edge_bound = edge_bound_check(build_pair_graph(sets));
        bool numeric = sets.low_values.size() >= sets.low_indices.size();
        bool walk_route = !report.edge_bound->verdict.even_walk_found() &&
                          report.edge_bound->bound_holds;
        item.pass = numeric && walk_route;
        item.detail = "|S| = " + std::to_string(sets.low_values.size()) +
                      ", |M| = " + std::to_string(sets.low_indices.size()) +
                      (report.edge_bound->verdict.even_walk_found()
                           ? ", pair graph HAS a nontrivial even closed walk"
                           : ", pair graph certified walk-free");
        report.checks.push_back(item);
    }
    {
        CheckItem item{"high_values_in_half_open_interval", true, ""};
        for (u64 t : sets.high_values) {
            bool in_a = t <= set.horizon() && set.contains(t);
            if (!(in_a && a_k < t && t <= a_k + b_k)) {
                item.pass = false;
                item.detail = "value " + std::to_string(t) + " not in A ∩ (" +
                              std::to_string(a_k) + ", " + std::to_string(a_k + b_k) + "]";
                break;
            }
        }
        if (item.pass)
            item.detail = std::to_string(sets.high_values.size()) + " values inside (" +
                          std::to_string(a_k) + ", " + std::to_string(a_k + b_k) + "]";
        report.checks.push_back(item);
    }
    {
        CheckItem item{"high_size_exact", sets.high_values.size() == sets.high_indices.size(), ""};
        item.detail = "|T| = " + std::to_string(sets.high_values.size()) +
                      ", |N| = " + std::to_string(sets.high_indices.size());
        report.checks.push_back(item);
    }
    return report;
}

bool StepCountReport::all_pass() const {
    if (!total_ok) return false;
    for (const auto& r : rows)
        if (!r.meets_k || !r.meets_gap_bound) return false;
    return true;
}

StepCountReport verify_step_counts(const NaturalSet& set, const ExtractionTrace& trace) {
    StepCountReport report;
    for (std::size_t k = 1; k <= trace.m(); ++k) {
        StepCountRow row;
        row.k = k;
        u64 a = trace.a[k - 1], b = trace.b[k - 1];
        row.count = set.interval_count(b, a + b);
        row.meets_k = row.count >= k;
        row.meets_gap_bound = static_cast<u128>(2) * b * (row.count + 1) >= static_cast<u128>(a) + b;
        report.rows.push_back(row);
    }
    report.count_x = set.count_leq(trace.x);
    report.required_total = trace.m() * (trace.m() + 1) / 2;
    report.total_ok = report.count_x >= report.required_total;
    return report;
}

AmgmReport verify_amgm_chain(const NaturalSet& set, const ExtractionTrace& trace) {
    AmgmReport report;
    const std::size_t m = trace.m();
    const double x = static_cast<double>(trace.x);
    const double lx = std::log(x);
    report.count_x = static_cast<double>(set.count_leq(trace.x));

    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        double a = static_cast<double>(trace.a[k]);
        double b = static_cast<double>(trace.b[k]);
        sum += (a + b) / (2.0 * b) - 1.0;
    }
    report.sum_terms = sum;

    double inter = 0.0;
    for (std::size_t k = 0; k + 1 < m; ++k)
        inter += static_cast<double>(trace.b[k + 1]) / (2.0 * static_cast<double>(trace.b[k]));
    inter += x / (2.0 * static_cast<double>(trace.b[m - 1]) * lx * lx);
    inter -= static_cast<double>(m);
    report.intermediate = inter;

    double md = static_cast<double>(m);
    report.amgm =
        0.5 * md * std::pow(x / (static_cast<double>(trace.b[0]) * lx * lx), 1.0 / md) - md;

    report.count_ge_sum = ge_with_rtol(report.count_x, report.sum_terms);
    report.sum_ge_intermediate = ge_with_rtol(report.sum_terms, report.intermediate);
    report.intermediate_ge_amgm = ge_with_rtol(report.intermediate, report.amgm);
    return report;
}

bool GrowthReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

GrowthReport verify_growth(const ExtractionTrace& trace) {
    GrowthReport report;
    for (std::size_t k = 0; k < trace.m(); ++k) {
        CheckItem item;
        item.name = "a_gt_3b_step_" + std::to_string(k + 1);
        item.pass = static_cast<u128>(trace.a[k]) > static_cast<u128>(3) * trace.b[k];
        item.detail = std::to_string(trace.a[k]) + " vs 3*" + std::to_string(trace.b[k]);
        report.checks.push_back(item);
    }
    for (std::size_t k = 0; k + 1 < trace.m(); ++k) {
        CheckItem item;
        item.name = "a_ratio_step_" + std::to_string(k + 1);
        item.pass = static_cast<u128>(trace.a[k + 1]) > static_cast<u128>(3) * trace.a[k];
        item.detail = std::to_string(trace.a[k + 1]) + " vs 3*" + std::to_string(trace.a[k]);
        report.checks.push_back(item);
    }
    return report;
}

VerifyReport full_verification(const NaturalSet& set, const ExtractionTrace& trace,
                               const RepPairTable& table) {
    VerifyReport report;
    report.x = trace.x;
    report.m = trace.m();
    report.replay = trace.replay_failures(set);
    report.growth = verify_growth(trace);
    // A corrupted trace must still yield a report; queries a section cannot
    // answer are recorded as errors instead of aborting the whole run.
    try {
        report.step_counts = verify_step_counts(set, trace);
    } catch (const Error& e) {
        report.errors.push_back(std::string("step counts: ") + e.what());
    }
    try {
        report.amgm = verify_amgm_chain(set, trace);
    } catch (const Error& e) {
        report.errors.push_back(std::string("amgm chain: ") + e.what());
    }
    report.pair_total = table.entries.size();
    report.pair_violations = table.violation_count();

    for (std::size_t k = 1; k <= trace.m(); ++k) {
        PerKReport per;
        per.k = k;
        per.pairs_complete = true;
        try {
            for (std::size_t i = 1; i < k; ++i)
                if (!table.at(i, k).pair) per.pairs_complete = false;
            if (per.pairs_complete) {
                PartitionSets sets = build_partition_sets(trace, table, k);
                per.containments = verify_containments(set, trace, sets);
            }
        } catch (const Error& e) {
            per.pairs_complete = false;
            report.errors.push_back("index " + std::to_string(k) + ": " + e.what());
        }
        report.per_k.push_back(per);
    }

    bool per_k_ok = true;
    for (const auto& per : report.per_k)
        if (per.containments && !per.containments->all_pass()) per_k_ok = false;
    report.all_pass = report.replay.empty() && report.growth.all_pass() &&
                      report.step_counts.all_pass() && report.amgm.all_pass() && per_k_ok &&
                      report.pair_violations == 0 && report.errors.empty();
    return report;
}

namespace {

bool in_any_gap(u64 value, const ExtractionTrace& trace) {
    for (std::size_t k = 0; k < trace.m(); ++k) {
        u64 a = trace.a[k], b = trace.b[k];
        if (value >= a - b && value < a) return true; // a > 3b, so a - b is safe
    }
    return false;
}

} // namespace

PatchResult patch_for_hypothesis(const NaturalSet& set, u64 x, std::size_t max_rounds,
                                 const ExtractOptions& options) {
    std::vector<u64> elements = set.elements();
    u64 horizon = set.horizon();
    std::vector<PatchInsertion> insertions;
    std::size_t round = 0;

    NaturalSet current(elements, horizon);
    ExtractionTrace trace = run_extraction(current, x, options);
    while (true) {
        RepPairTable table = build_rep_table(current, trace);
        std::vector<const PairEntry*> violations;
        for (const auto& e : table.entries)
            if (!e.pair) violations.push_back(&e);
        if (violations.empty())
            return PatchResult{std::move(current), round, std::move(insertions),
                               std::move(trace), std::move(table)};
        if (round >= max_rounds) {
            std::ostringstream msg;
            msg << "round cap " << max_rounds << " reached with " << violations.size()
                << " unresolved pair sums:";
            for (const auto* v : violations) msg << " " << v->n;
            fail(ErrorKind::PatchFailure, msg.str());
        }
        ++round;

        std::set<u64> pool(elements.begin(), elements.end());
        for (const auto* v : violations) {
            u64 n = v->n;
            u64 a_j = trace.a[v->j - 1];
            u64 b_j = trace.b[v->j - 1];
            std::optional<RepPair> placed;
            // preferred zone: d in (a_j, a_j + b_j], c = n - d
            u64 d_hi = std::min(a_j + b_j, n);
            for (u64 d = a_j + 1; d <= d_hi && !placed; ++d) {
                u64 c = n - d;
                if (in_any_gap(c, trace) || in_any_gap(d, trace)) continue;
                placed = RepPair{c, d};
            }
            // fallback: d below a_j, down to the midpoint
            if (!placed) {
                for (u64 d = a_j - 1; d + 1 > (n + 1) / 2 && !placed; --d) {
                    if (d == 0) break;
                    u64 c = n - d;
                    if (c > d) break;
                    if (in_any_gap(c, trace) || in_any_gap(d, trace)) continue;
                    placed = RepPair{c, d};
                }
            }
            if (!placed)
                fail(ErrorKind::PatchFailure,
                     "no legal placement for pair sum n = " + std::to_string(n) + " (i = " +
                         std::to_string(v->i) + ", j = " + std::to_string(v->j) + ")");
            if (placed->d > horizon)
                fail(ErrorKind::PatchFailure, "placement for n = " + std::to_string(n) +
                                                  " would exceed the horizon");
            pool.insert(placed->c);
            pool.insert(placed->d);
            insertions.push_back(PatchInsertion{round, v->i, v->j, n, placed->c, placed->d});
        }
        elements.assign(pool.begin(), pool.end());
        current = NaturalSet(elements, horizon);
        try {
            trace = run_extraction(current, x, options);
        } catch (const Error& e) {
            fail(ErrorKind::PatchFailure,
                 std::string("extraction failed after round ") + std::to_string(round) + ": " +
                     e.what());
        }
    }
}

} // namespace addrep
