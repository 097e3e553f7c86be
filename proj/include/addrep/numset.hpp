#pragma once

// Exact finite-truncation model of an integer set A.
//
// An infinite set is represented by its elements up to an explicit horizon H:
// membership queries for n <= H are exact, queries beyond H are rejected
// rather than silently approximated. All counting queries (representation
// function r(A,n), counting function |A(x)|, interval counts) operate on the
// truncation and declare the horizon they need.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "addrep/errors.hpp"

namespace addrep {

// Largest accepted horizon. Everything is 64-bit unsigned; sums of two
// elements must stay representable, hence the 2^63 ceiling.
inline constexpr std::uint64_t kMaxHorizon = std::uint64_t{1} << 63;

class NaturalSet {
public:
    // elements must be strictly increasing, all <= horizon; horizon <= 2^63.
    NaturalSet(std::vector<std::uint64_t> elements, std::uint64_t horizon);

    // Set file format: optional first line "# horizon=<H>", then one
    // non-negative decimal per line, strictly increasing; other '#' lines
    // are ignored. Without a horizon line, H = last element.
    static NaturalSet from_stream(std::istream& in);
    static NaturalSet from_file(const std::string& path);
    void write(std::ostream& out) const;
    void write_file(const std::string& path) const;

    const std::vector<std::uint64_t>& elements() const noexcept { return elements_; }
    std::uint64_t horizon() const noexcept { return horizon_; }
    bool empty() const noexcept { return elements_.empty(); }
    std::size_t size() const noexcept { return elements_.size(); }

    // Exact membership for n <= horizon; HorizonExceeded beyond.
    bool contains(std::uint64_t n) const;

    // r(A,n): number of pairs a <= b with a,b in A and a+b = n.
    // Exact for n <= horizon (all summands of n are <= n).
    std::uint64_t rep_count(std::uint64_t n) const;

    // |A(x)|: number of elements <= x. Requires x <= horizon.
    std::uint64_t count_leq(std::uint64_t x) const;

    // |A ∩ (lo, hi]|. Requires hi <= horizon and lo <= hi.
    std::uint64_t interval_count(std::uint64_t lo_exclusive,
                                 std::uint64_t hi_inclusive) const;

    // Smallest element in (lo, hi], if any. Requires hi <= horizon.
    std::optional<std::uint64_t> min_in_interval(std::uint64_t lo_exclusive,
                                                 std::uint64_t hi_inclusive) const;

    // Smallest element >= n (no horizon check; n capped by elements).
    std::optional<std::uint64_t> least_geq(std::uint64_t n) const;

private:
    std::vector<std::uint64_t> elements_;
    std::uint64_t horizon_ = 0;
};

// Window scan for the representation hypothesis "r(A,n) != 1 for large n".
// exceptional collects every n in [n_lo, n_hi] with r(A,n) = 1 (the forbidden
// value); zero_count counts n with r = 0 (permitted). inferred_n0 is
// 1 + max(exceptional), or n_lo when the window is clean; it is only valid
// relative to the scanned window.
struct RepCountWindow {
    std::uint64_t n_lo = 0;
    std::uint64_t n_hi = 0;
    std::vector<std::uint64_t> exceptional;
    std::uint64_t zero_count = 0;
    std::uint64_t inferred_n0 = 0;
};

// May partition the window across worker threads (capped by ADDREP_THREADS);
// output is canonical regardless.
RepCountWindow scan_hypothesis(const NaturalSet& set,
                               std::uint64_t n_lo, std::uint64_t n_hi);

// One maximal run of integers t in [t_lo, t_hi] for which (t, 2t] misses the
// set. prev_element / next_element are the neighbouring elements around the
// run (absent below the first / beyond the last element).
struct DoublingViolation {
    std::uint64_t t_first = 0;
    std::uint64_t t_last = 0;
    std::optional<std::uint64_t> prev_element;
    std::optional<std::uint64_t> next_element;
};

// Checks the doubling property: every interval (t, 2t], t in [t_lo, t_hi],
// contains an element. Empty result iff the property holds for every integer
// t in range. Requires t_lo >= 1 and 2*t_hi <= horizon (exactness).
std::vector<DoublingViolation> doubling_check(const NaturalSet& set,
                                              std::uint64_t t_lo,
                                              std::uint64_t t_hi);

// Set generators. Families:
//   evens            {0, 2, 4, ...}          (includes 0)
//   all              {0, 1, ..., H}          (includes 0)
//   powers(b)        {1, b, b^2, ...}, b >= 2
//   ap(s, d)         {s, s+d, s+2d, ...}, d >= 1
//   random(e)        n included independently with probability min(1, n^-e);
//                    n = 0 and n = 1 are always included. Deterministic in seed.
//   from_file(path)  reads the set file format (horizon taken from the file)
NaturalSet generate(const std::string& family_spec, std::uint64_t horizon,
                    std::uint64_t seed = 0);

// Worker cap for parallel scans: min(hardware, $ADDREP_THREADS), at least 1.
unsigned worker_count();

} // namespace addrep
