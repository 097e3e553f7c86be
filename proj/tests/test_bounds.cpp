#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "addrep/bounds.hpp"

using addrep::Error;
using addrep::ErrorKind;
using u64 = std::uint64_t;

namespace {

// frozen by high-precision evaluation (mpmath, 30 digits)
constexpr double kThm1At1e6 = 13.8415035720569357;
constexpr double kBpAt1e6 = 0.0095327159587168979;
constexpr double kNrsAt1e6 = 190.868331977222328;
constexpr double kLimsupAt1e6Count100 = 8.28590694043008634;
constexpr double kHalfESquared = 3.69452804946532511;

bool close(double a, double b, double rtol = 1e-12) {
    return std::fabs(a - b) <= rtol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

void require_kind(ErrorKind kind, const std::function<void()>& fn) {
    try {
        fn();
        FAIL_CHECK("expected error " << addrep::error_kind_name(kind));
    } catch (const Error& e) {
        CHECK(e.kind() == kind);
    }
}

} // namespace

TEST_CASE("thm1 evaluator") {
    // at the double nearest e^e, ln ln x is exactly 1, forcing e^2/2
    double x_ee = std::exp(std::exp(1.0));
    CHECK(close(addrep::thm1_value(x_ee), kHalfESquared, 1e-9));
    CHECK(close(addrep::thm1_bound(1000000), kThm1At1e6));
    CHECK(addrep::thm1_bound(1000000) > 13.83);
    CHECK(addrep::thm1_bound(1000000) < 13.85);
    require_kind(ErrorKind::DomainError, [] { addrep::thm1_bound(15); });
    require_kind(ErrorKind::DomainError, [] { addrep::thm1_value(2.0); });
}

TEST_CASE("nrs evaluator") {
    CHECK(close(addrep::nrs_value(std::exp(1.0), 1.0), 1.0, 1e-12));
    CHECK(close(addrep::nrs_upper(1000000, 1.0), kNrsAt1e6));
    CHECK(close(addrep::nrs_upper(1000000, 0.5), kNrsAt1e6 / 2));
    require_kind(ErrorKind::DomainError, [] { addrep::nrs_upper(1, 1.0); });
    require_kind(ErrorKind::DomainError, [] { addrep::nrs_upper(100, 0.0); });
    require_kind(ErrorKind::DomainError, [] { addrep::nrs_upper(100, -2.0); });
}

TEST_CASE("bp evaluator and the exact thm1 ratio") {
    CHECK(close(addrep::bp_bound(1000000), kBpAt1e6));
    CHECK(addrep::bp_bound(1000000) < addrep::thm1_bound(1000000));
    require_kind(ErrorKind::DomainError, [] { addrep::bp_bound(15); });

    // thm1 = 1452 * bp within 1 ulp across a log-spaced grid in [16, 1e12]
    for (int i = 0; i <= 200; ++i) {
        double xr = 16.0 * std::pow(1e12 / 16.0, i / 200.0);
        u64 x = static_cast<u64>(std::llround(xr));
        double t = addrep::thm1_bound(x);
        double p = 1452.0 * addrep::bp_bound(x);
        double ulp = std::nextafter(t, std::numeric_limits<double>::infinity()) - t;
        CAPTURE(x);
        CHECK(std::fabs(t - p) <= ulp);
    }
}

TEST_CASE("limsup statistic") {
    double x_ee = std::exp(std::exp(1.0));
    CHECK(close(addrep::limsup_statistic_value(x_ee, 20.0), 20.0, 1e-9));
    CHECK(close(addrep::limsup_statistic(1000000, 100), kLimsupAt1e6Count100));
    CHECK(close(addrep::limsup_statistic(1000000, 300), 3 * kLimsupAt1e6Count100));
    require_kind(ErrorKind::DomainError, [] { addrep::limsup_statistic(15, 1); });
}

TEST_CASE("evaluators are monotone increasing on a grid") {
    double prev_t = 0, prev_n = 0, prev_b = 0;
    for (u64 x = 16; x < 100000; x = x * 5 / 4 + 1) {
        double t = addrep::thm1_bound(x);
        double n = addrep::nrs_upper(x, 1.0);
        double b = addrep::bp_bound(x);
        CHECK(t > prev_t);
        CHECK(n > prev_n);
        CHECK(b > prev_b);
        CHECK(std::isfinite(t));
        prev_t = t;
        prev_n = n;
        prev_b = b;
    }
}

TEST_CASE("bound_report on dense and sparse sets") {
    addrep::NaturalSet evens = addrep::generate("evens", 1000000);
    addrep::BoundReport dense = addrep::bound_report(evens, 1000000, 1.0);
    CHECK(dense.count == 500001);
    CHECK(dense.verdict == addrep::BoundVerdict::consistent);
    CHECK(!dense.hypothesis.has_value());
    CHECK(close(dense.thm1, 1452.0 * dense.bp, 1e-12));

    addrep::NaturalSet powers = addrep::generate("powers(2)", 1000000);
    addrep::BoundReport annotated =
        addrep::bound_report(powers, 1000000, 1.0, std::make_pair<u64, u64>(4, 1024));
    CHECK(annotated.count == 20);
    CHECK(annotated.verdict == addrep::BoundVerdict::consistent);
    REQUIRE(annotated.hypothesis.has_value());
    CHECK(!annotated.hypothesis->exceptional.empty());

    addrep::NaturalSet sparse({1, 500000}, 1000000);
    addrep::BoundReport thin = addrep::bound_report(sparse, 1000000, 1.0);
    CHECK(thin.verdict == addrep::BoundVerdict::inconclusive_finite_x);

    // the verdict vocabulary has no refutation
    CHECK(std::string(addrep::bound_verdict_name(dense.verdict)) == "consistent");
    CHECK(std::string(addrep::bound_verdict_name(thin.verdict)) == "inconclusive-finite-x");

    require_kind(ErrorKind::HorizonExceeded, [&] { addrep::bound_report(sparse, 2000000, 1.0); });
    require_kind(ErrorKind::DomainError, [&] { addrep::bound_report(sparse, 15, 1.0); });
}
