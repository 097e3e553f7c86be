#include "addrep/bounds.hpp"

#include <cmath>
#include <string>

namespace addrep {

namespace {

double log_ratio(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x))
        fail(ErrorKind::DomainError, std::string(what) + ": x must be positive and finite");
    double l = std::log(x);
    double ll = std::log(l);
    if (!(ll > 0.0))
        fail(ErrorKind::DomainError, std::string(what) + ": needs ln ln x > 0 (x > e)");
    return l / ll;
}

} // namespace

double thm1_value(double x) {
    double r = log_ratio(x, "thm1");
    return 0.5 * r * r;
}

double nrs_value(double x, double c) {
    if (!(c > 0.0)) fail(ErrorKind::DomainError, "nrs: c must be positive");
    if (!(x >= 1.0) || !std::isfinite(x)) fail(ErrorKind::DomainError, "nrs: x must be >= 1");
    double l = std::log(x);
    return c * l * l;
}

double bp_value(double x) {
    double r = log_ratio(x, "bp");
    return r * r / 2904.0;
}

double limsup_statistic_value(double x, double count) {
    double r = log_ratio(x, "limsup_stat");
    return count * std::pow(1.0 / r, 1.5);
}

namespace {

void require_floor(std::uint64_t x, std::uint64_t floor, const char* what) {
    if (x < floor)
        fail(ErrorKind::DomainError, std::string(what) + ": x must be >= " + std::to_string(floor));
}

} // namespace

double thm1_bound(std::uint64_t x) {
    require_floor(x, 16, "thm1_bound");
    return thm1_value(static_cast<double>(x));
}

double nrs_upper(std::uint64_t x, double c) {
    require_floor(x, 2, "nrs_upper");
    return nrs_value(static_cast<double>(x), c);
}

double bp_bound(std::uint64_t x) {
    require_floor(x, 16, "bp_bound");
    return bp_value(static_cast<double>(x));
}

double limsup_statistic(std::uint64_t x, std::uint64_t count) {
    require_floor(x, 16, "limsup_statistic");
    return limsup_statistic_value(static_cast<double>(x), static_cast<double>(count));
}

const char* bound_verdict_name(BoundVerdict v) {
    switch (v) {
        case BoundVerdict::consistent: return "consistent";
        case BoundVerdict::inconclusive_finite_x: return "inconclusive-finite-x";
    }
    return "inconclusive-finite-x";
}

BoundReport bound_report(const NaturalSet& set, std::uint64_t x, double nrs_c,
                         std::optional<std::pair<std::uint64_t, std::uint64_t>> scan_window) {
    require_floor(x, 16, "bound_report");
    BoundReport report;
    report.x = x;
    report.count = set.count_leq(x); // HorizonExceeded if x > horizon
    report.thm1 = thm1_bound(x);
    report.nrs_c = nrs_c;
    report.nrs = nrs_upper(x, nrs_c);
    report.bp = bp_bound(x);
    report.limsup_stat = limsup_statistic(x, report.count);
    report.verdict = (static_cast<double>(report.count) > report.thm1)
                         ? BoundVerdict::consistent
                         : BoundVerdict::inconclusive_finite_x;
    if (scan_window)
        report.hypothesis = scan_hypothesis(set, scan_window->first, scan_window->second);
    return report;
}

} // namespace addrep
