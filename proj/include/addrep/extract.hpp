#pragma once

// Gap extraction pipeline and its verifiers.
//
// One gap step takes a base b and scans blocks (i*b, (i+1)*b] until the first
// empty block, then picks the least element a of the doubling window above
// it. The step guarantees a > 3b, an empty gap [a-b, a), and the interval
// count |(b, a+b] ∩ A| >= (a+b)/(2b) - 1. run_extraction iterates with
// b_{k+1} = a_k + b_k until a_m + b_m > x/(ln x)^2, producing a trace whose
// every claim can be replayed against the source set.
//
// For each extracted pair sum a_i + a_j an alternative representation
// (c, d), c <= d, d != a_j is chosen when one exists; a missing one
// certifies r(A, a_i + a_j) = 1. Partition sets split the chosen pairs at an
// index k by whether d falls below or above a_k; the low side induces a
// multigraph whose even-closed-walk freeness bounds |M_k| by |S_k|.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "addrep/numset.hpp"
#include "addrep/walkgraph.hpp"

namespace addrep {

struct StepRecord {
    std::uint64_t blocks = 0; // number of leading non-empty blocks in the scan
    std::uint64_t count = 0;  // |(b_k, a_k + b_k] ∩ A|
};

struct RegimeInfo {
    std::uint64_t count = 0; // |A(x)|
    double bound = 0.0;      // (ln x / ln ln x)^2
    bool within = false;     // reported up front, never enforced
};

struct ExtractionTrace {
    std::uint64_t x = 0;
    std::vector<std::uint64_t> a;
    std::vector<std::uint64_t> b;
    std::vector<StepRecord> steps;
    RegimeInfo regime;

    std::size_t m() const noexcept { return a.size(); }
    double threshold() const; // x / (ln x)^2

    // Re-checks every invariant and stored record against the set; returns
    // one message per failed check (empty = clean replay).
    std::vector<std::string> replay_failures(const NaturalSet& set) const;
};

struct GapStepResult {
    std::uint64_t a = 0;
    std::uint64_t blocks = 0;
    std::uint64_t count = 0;
};

// One extraction step at base b. Errors: DoublingFailure when (b, 2b] or the
// doubling window above the gap is empty; NoGapFound when no empty block
// appears within the cap (default |A(x)| + 1); HorizonExceeded when the scan
// would need membership beyond the horizon.
GapStepResult gap_step(const NaturalSet& set, std::uint64_t b, std::uint64_t x,
                       std::optional<std::uint64_t> block_cap = {});

struct ExtractOptions {
    std::optional<std::uint64_t> a0; // must be an element if given
    std::uint64_t n0 = 1;            // else a0 = least element >= max(n0, 1)
    std::optional<std::uint64_t> block_cap;
};

// Requires x >= 16 and x <= horizon; every interval query checks its own
// horizon and fails loudly. RegimeViolation if a step would reach a+b >= x
// or the start already exceeds x/(ln x)^2.
ExtractionTrace run_extraction(const NaturalSet& set, std::uint64_t x,
                               const ExtractOptions& options = {});

struct RepPair {
    std::uint64_t c = 0;
    std::uint64_t d = 0;
};

// Entry for an index pair i < j (1-based). No pair means a violation:
// r(A, n) = 1 at n = a_i + a_j.
struct PairEntry {
    std::size_t i = 0;
    std::size_t j = 0;
    std::uint64_t n = 0;
    std::optional<RepPair> pair;
};

struct RepPairTable {
    std::size_t m = 0;
    std::vector<PairEntry> entries; // all i < j <= m, i-major order
    const PairEntry& at(std::size_t i, std::size_t j) const;
    std::size_t violation_count() const;
};

// Minimal-c representation of a_i + a_j with c <= d, both elements, d != a_j;
// nullopt certifies r(A, a_i + a_j) = 1. Requires a_i < a_j, both elements,
// a_i + a_j <= horizon.
std::optional<RepPair> choose_rep_pair(const NaturalSet& set, std::uint64_t a_i,
                                       std::uint64_t a_j);

RepPairTable build_rep_table(const NaturalSet& set, const ExtractionTrace& trace);

// Split of the pairs (i, k), i < k, by d against the pivot a_k.
//   low_indices  (M_k): i with d < a_k;  low_values (S_k) = {c, d : i in M_k}
//   high_indices (N_k): i with d > a_k;  high_values (T_k) = {d : i in N_k}
// low_pairs keeps the (c, d) per low index, in index order, for the graph.
struct PartitionSets {
    std::size_t k = 0;
    std::vector<std::size_t> low_indices;
    std::vector<std::size_t> high_indices;
    std::vector<std::uint64_t> low_values;  // sorted, deduplicated
    std::vector<std::uint64_t> high_values; // sorted, deduplicated
    std::vector<RepPair> low_pairs;
};

// PairMissing if any needed pair is a violation. d = a_k cannot occur for
// tables built by build_rep_table (the selection already excludes d = a_j
// and j = k here); hand-built tables violating it are rejected loudly.
PartitionSets build_partition_sets(const ExtractionTrace& trace, const RepPairTable& table,
                                   std::size_t k);

// Vertex set = low_values; one edge {c, d} per low index (loop when c = d).
// Asserts edge count = |low_indices| and pairwise-distinct edges.
MultiGraph build_pair_graph(const PartitionSets& sets);

struct CheckItem {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ContainmentReport {
    std::size_t k = 0;
    std::vector<CheckItem> checks;
    std::optional<EdgeBoundReport> edge_bound; // the |S| >= |M| route
    bool all_pass() const;
};

// Containments at index k: low values in A ∩ (b_k, a_k); |S| >= |M| via the
// walk bound on the pair graph; high values in A ∩ (a_k, a_k + b_k] with
// |T| = |N|. Reports, never throws.
ContainmentReport verify_containments(const NaturalSet& set, const ExtractionTrace& trace,
                                      const PartitionSets& sets);

struct StepCountRow {
    std::size_t k = 0;
    std::uint64_t count = 0;   // |(b_k, a_k + b_k] ∩ A|
    bool meets_k = false;      // count >= k (needs the hypothesis)
    bool meets_gap_bound = false; // count >= (a_k+b_k)/(2 b_k) - 1 (by construction)
};

struct StepCountReport {
    std::vector<StepCountRow> rows;
    std::uint64_t count_x = 0;
    std::uint64_t required_total = 0; // m(m+1)/2
    bool total_ok = false;
    bool all_pass() const;
};

StepCountReport verify_step_counts(const NaturalSet& set, const ExtractionTrace& trace);

struct AmgmReport {
    double count_x = 0.0;
    double sum_terms = 0.0;    // sum over k of (a_k+b_k)/(2 b_k) - 1
    double intermediate = 0.0; // sum b_{k+1}/(2 b_k) + x/(2 b_m (ln x)^2) - m
    double amgm = 0.0;         // (m/2) (x/(b_1 (ln x)^2))^{1/m} - m
    bool count_ge_sum = false;
    bool sum_ge_intermediate = false;
    bool intermediate_ge_amgm = false;
    bool all_pass() const { return count_ge_sum && sum_ge_intermediate && intermediate_ge_amgm; }
};

// Floating-point chain with relative tolerance 1e-9.
AmgmReport verify_amgm_chain(const NaturalSet& set, const ExtractionTrace& trace);

struct GrowthReport {
    std::vector<CheckItem> checks; // a_{k+1} > 3 a_k and a_k > 3 b_k
    bool all_pass() const;
};

GrowthReport verify_growth(const ExtractionTrace& trace);

// Aggregate of every verifier plus the per-k partition/graph route.
struct PerKReport {
    std::size_t k = 0;
    bool pairs_complete = false; // all (i, k) pairs present
    std::optional<ContainmentReport> containments;
};

struct VerifyReport {
    std::uint64_t x = 0;
    std::size_t m = 0;
    std::vector<std::string> replay;
    GrowthReport growth;
    StepCountReport step_counts;
    AmgmReport amgm;
    std::vector<PerKReport> per_k;
    std::size_t pair_total = 0;
    std::size_t pair_violations = 0;
    std::vector<std::string> errors; // sections a corrupted input made unanswerable
    bool all_pass = false;
};

VerifyReport full_verification(const NaturalSet& set, const ExtractionTrace& trace,
                               const RepPairTable& table);

struct PatchInsertion {
    std::size_t round = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    std::uint64_t n = 0;
    std::uint64_t c = 0;
    std::uint64_t d = 0;
};

struct PatchResult {
    NaturalSet set;
    std::size_t rounds = 0;
    std::vector<PatchInsertion> insertions;
    ExtractionTrace trace;   // final clean-round trace
    RepPairTable table;      // final table (no violations)
};

// Best-effort fixpoint: extract, insert an alternative pair for every
// violated pair sum (both elements outside every recorded gap, preferring
// (a_j, a_j + b_j]), re-extract; stops when a round is violation-free.
// PatchFailure when no legal placement exists or the round cap is hit.
// Convergence is not guaranteed.
PatchResult patch_for_hypothesis(const NaturalSet& set, std::uint64_t x,
                                 std::size_t max_rounds,
                                 const ExtractOptions& options = {});

} // namespace addrep
