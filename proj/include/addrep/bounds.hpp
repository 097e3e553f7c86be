#pragma once

// Counting-bound evaluators and the comparison report.
//
// Three classical bound shapes are evaluated at finite x, all with natural
// logarithms (the choice is surfaced in every report):
//   thm1  (1/2)    * (ln x / ln ln x)^2      lower-bound target
//   nrs   c        * (ln x)^2                upper-bound shape, c configurable
//   bp    (1/2904) * (ln x / ln ln x)^2      prior lower-bound constant
// plus the limsup statistic count * (ln ln x / ln x)^{3/2}. A finite-x
// comparison can support the lower bound (`consistent`) or be inconclusive;
// it can never refute an asymptotic statement, so no `refuted` verdict exists.

#include <cstdint>
#include <optional>
#include <utility>

#include "addrep/numset.hpp"

namespace addrep {

// Real-valued formula cores. Domain: x > e for the ln-ln shapes (so that
// ln ln x > 0), x > 1 for the plain ln shape.
double thm1_value(double x);
double nrs_value(double x, double c);
double bp_value(double x);
double limsup_statistic_value(double x, double count);

// Integer-argument evaluators with the contract domain floor x >= 16
// (x >= 2 for nrs). DomainError below the floor.
double thm1_bound(std::uint64_t x);
double nrs_upper(std::uint64_t x, double c);
double bp_bound(std::uint64_t x);
double limsup_statistic(std::uint64_t x, std::uint64_t count);

enum class BoundVerdict { consistent, inconclusive_finite_x };

const char* bound_verdict_name(BoundVerdict v);

struct BoundReport {
    std::uint64_t x = 0;
    std::uint64_t count = 0; // |A(x)|
    double thm1 = 0.0;
    double nrs_c = 1.0;
    double nrs = 0.0;
    double bp = 0.0;
    double limsup_stat = 0.0;
    BoundVerdict verdict = BoundVerdict::inconclusive_finite_x;
    // Present when a hypothesis scan window was requested.
    std::optional<RepCountWindow> hypothesis;
};

// Assembles all evaluators plus |A(x)|. Requires 16 <= x <= horizon and
// nrs_c > 0. scan_window, when given, runs scan_hypothesis over [lo, hi]
// and attaches the result (beware: cost is O(window * |A|)).
BoundReport bound_report(const NaturalSet& set, std::uint64_t x, double nrs_c,
                         std::optional<std::pair<std::uint64_t, std::uint64_t>> scan_window = {});

} // namespace addrep
