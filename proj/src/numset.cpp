#include "addrep/numset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace addrep {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::uint64_t parse_u64(const std::string& token, const std::string& context) {
    std::uint64_t value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || token.empty())
        fail(ErrorKind::MalformedInput, context + ": not a non-negative integer: '" + token + "'");
    return value;
}

} // namespace

NaturalSet::NaturalSet(std::vector<std::uint64_t> elements, std::uint64_t horizon)
    : elements_(std::move(elements)), horizon_(horizon) {
    if (horizon_ > kMaxHorizon)
        fail(ErrorKind::DomainError, "horizon above 2^63 is rejected");
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (i > 0 && elements_[i] <= elements_[i - 1])
            fail(ErrorKind::DomainError, "elements must be strictly increasing");
        if (elements_[i] > horizon_)
            fail(ErrorKind::DomainError, "element " + std::to_string(elements_[i]) +
                                             " exceeds horizon " + std::to_string(horizon_));
    }
}

NaturalSet NaturalSet::from_stream(std::istream& in) {
    std::vector<std::uint64_t> elements;
    std::optional<std::uint64_t> horizon;
    std::string line;
    std::size_t lineno = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const std::string prefix = "# horizon=";
            if (t.rfind(prefix, 0) == 0) {
                if (!first_content)
                    fail(ErrorKind::MalformedInput,
                         "line " + std::to_string(lineno) + ": horizon line must come first");
                horizon = parse_u64(trim(t.substr(prefix.size())),
                                    "line " + std::to_string(lineno));
            }
            first_content = false;
            continue;
        }
        first_content = false;
        std::uint64_t v = parse_u64(t, "line " + std::to_string(lineno));
        if (!elements.empty() && v <= elements.back())
            fail(ErrorKind::MalformedInput,
                 "line " + std::to_string(lineno) + ": elements must be strictly increasing");
        elements.push_back(v);
    }
    if (!horizon) {
        if (elements.empty())
            fail(ErrorKind::MalformedInput, "empty set requires an explicit horizon line");
        horizon = elements.back();
    }
    if (!elements.empty() && elements.back() > *horizon)
        fail(ErrorKind::MalformedInput, "element " + std::to_string(elements.back()) +
                                            " exceeds declared horizon " + std::to_string(*horizon));
    if (*horizon > kMaxHorizon)
        fail(ErrorKind::MalformedInput, "horizon above 2^63 is rejected");
    return NaturalSet(std::move(elements), *horizon);
}

NaturalSet NaturalSet::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open set file: " + path);
    return from_stream(in);
}

void NaturalSet::write(std::ostream& out) const {
    out << "# horizon=" << horizon_ << "\n";
    for (std::uint64_t v : elements_) out << v << "\n";
}

void NaturalSet::write_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::IoError, "cannot open output file: " + path);
    write(out);
    if (!out) fail(ErrorKind::IoError, "write failed: " + path);
}

bool NaturalSet::contains(std::uint64_t n) const {
    if (n > horizon_)
        fail(ErrorKind::HorizonExceeded, "membership query at " + std::to_string(n) +
                                             " beyond horizon " + std::to_string(horizon_));
    return std::binary_search(elements_.begin(), elements_.end(), n);
}

std::uint64_t NaturalSet::rep_count(std::uint64_t n) const {
    if (n > horizon_)
        fail(ErrorKind::HorizonExceeded, "rep_count(" + std::to_string(n) + ") beyond horizon " +
                                             std::to_string(horizon_));
    // two-pointer over the sorted prefix <= n
    auto hi_it = std::upper_bound(elements_.begin(), elements_.end(), n);
    std::int64_t lo = 0;
    std::int64_t hi = static_cast<std::int64_t>(hi_it - elements_.begin()) - 1;
    std::uint64_t count = 0;
    while (lo <= hi) {
        std::uint64_t s = elements_[static_cast<std::size_t>(lo)] +
                          elements_[static_cast<std::size_t>(hi)];
        if (s == n) {
            ++count;
            ++lo;
            --hi;
        } else if (s < n) {
            ++lo;
        } else {
            --hi;
        }
    }
    return count;
}

std::uint64_t NaturalSet::count_leq(std::uint64_t x) const {
    if (x > horizon_)
        fail(ErrorKind::HorizonExceeded, "counting query at " + std::to_string(x) +
                                             " beyond horizon " + std::to_string(horizon_));
    return static_cast<std::uint64_t>(
        std::upper_bound(elements_.begin(), elements_.end(), x) - elements_.begin());
}

std::uint64_t NaturalSet::interval_count(std::uint64_t lo_exclusive,
                                         std::uint64_t hi_inclusive) const {
    if (hi_inclusive > horizon_)
        fail(ErrorKind::HorizonExceeded, "interval (" + std::to_string(lo_exclusive) + ", " +
                                             std::to_string(hi_inclusive) + "] beyond horizon " +
                                             std::to_string(horizon_));
    if (lo_exclusive > hi_inclusive)
        fail(ErrorKind::EmptyRange, "interval (" + std::to_string(lo_exclusive) + ", " +
                                        std::to_string(hi_inclusive) + "] has lo > hi");
    return count_leq(hi_inclusive) - count_leq(lo_exclusive);
}

std::optional<std::uint64_t> NaturalSet::min_in_interval(std::uint64_t lo_exclusive,
                                                         std::uint64_t hi_inclusive) const {
    if (hi_inclusive > horizon_)
        fail(ErrorKind::HorizonExceeded, "interval (" + std::to_string(lo_exclusive) + ", " +
                                             std::to_string(hi_inclusive) + "] beyond horizon " +
                                             std::to_string(horizon_));
    auto it = std::upper_bound(elements_.begin(), elements_.end(), lo_exclusive);
    if (it != elements_.end() && *it <= hi_inclusive) return *it;
    return std::nullopt;
}

std::optional<std::uint64_t> NaturalSet::least_geq(std::uint64_t n) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), n);
    if (it != elements_.end()) return *it;
    return std::nullopt;
}

unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("ADDREP_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v >= 1 && v < 1024) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

namespace {

struct WindowChunk {
    std::vector<std::uint64_t> exceptional;
    std::uint64_t zero_count = 0;
};

WindowChunk scan_chunk(const NaturalSet& set, std::uint64_t lo, std::uint64_t hi) {
    WindowChunk chunk;
    for (std::uint64_t n = lo; n <= hi; ++n) {
        std::uint64_t r = set.rep_count(n);
        if (r == 1) chunk.exceptional.push_back(n);
        else if (r == 0) ++chunk.zero_count;
        if (n == hi) break; // guards n+1 overflow at 2^64-1 (unreachable below horizon)
    }
    return chunk;
}

} // namespace

RepCountWindow scan_hypothesis(const NaturalSet& set, std::uint64_t n_lo, std::uint64_t n_hi) {
    if (n_hi > set.horizon())
        fail(ErrorKind::HorizonExceeded, "scan window end " + std::to_string(n_hi) +
                                             " beyond horizon " + std::to_string(set.horizon()));
    RepCountWindow window;
    window.n_lo = n_lo;
    window.n_hi = n_hi;
    if (n_lo > n_hi) {
        window.inferred_n0 = n_lo;
        return window;
    }
    std::uint64_t span = n_hi - n_lo + 1;
    unsigned workers = worker_count();
    std::vector<WindowChunk> chunks;
    if (workers <= 1 || span < 4096) {
        chunks.push_back(scan_chunk(set, n_lo, n_hi));
    } else {
        unsigned parts = static_cast<unsigned>(std::min<std::uint64_t>(workers, span));
        chunks.resize(parts);
        std::vector<std::thread> pool;
        pool.reserve(parts);
        for (unsigned p = 0; p < parts; ++p) {
            std::uint64_t lo = n_lo + span * p / parts;
            std::uint64_t hi = n_lo + span * (p + 1) / parts - 1;
            pool.emplace_back([&, p, lo, hi] { chunks[p] = scan_chunk(set, lo, hi); });
        }
        for (auto& t : pool) t.join();
    }
    for (auto& chunk : chunks) {
        window.exceptional.insert(window.exceptional.end(), chunk.exceptional.begin(),
                                  chunk.exceptional.end());
        window.zero_count += chunk.zero_count;
    }
    window.inferred_n0 = window.exceptional.empty() ? n_lo : window.exceptional.back() + 1;
    return window;
}

std::vector<DoublingViolation> doubling_check(const NaturalSet& set, std::uint64_t t_lo,
                                              std::uint64_t t_hi) {
    if (t_lo < 1) fail(ErrorKind::DomainError, "doubling check requires t_lo >= 1");
    if (t_hi > set.horizon() / 2)
        fail(ErrorKind::HorizonExceeded, "doubling check needs 2*t_hi <= horizon");
    std::vector<DoublingViolation> violations;
    if (t_lo > t_hi) return violations;

    const auto& els = set.elements();
    // For t in a gap [p, q) between consecutive elements, (t, 2t] misses the
    // set exactly when q > 2t, i.e. t <= (q-1)/2. Segment walk: the virtual
    // gap below the first element has p = none, the one above the last has
    // q = none (and always violates, since membership up to 2*t_hi is exact).
    auto add_segment = [&](std::optional<std::uint64_t> p, std::optional<std::uint64_t> q) {
        std::uint64_t lo = std::max(t_lo, p.value_or(0));
        std::uint64_t hi = t_hi;
        if (q) {
            if (*q == 0) return;
            hi = std::min(hi, *q - 1);             // t stays inside the gap
            hi = std::min(hi, (*q - 1) / 2);       // violation condition q > 2t
        }
        if (lo > hi) return;
        violations.push_back(DoublingViolation{lo, hi, p, q});
    };

    if (els.empty()) {
        add_segment(std::nullopt, std::nullopt);
        return violations;
    }
    add_segment(std::nullopt, els.front());
    for (std::size_t i = 0; i + 1 < els.size(); ++i) add_segment(els[i], els[i + 1]);
    add_segment(els.back(), std::nullopt);
    return violations;
}

namespace {

// Deterministic uniform double in [0,1) independent of library distributions.
double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Dense families walk every candidate up to the horizon; refuse sizes that
// could not be materialized anyway.
constexpr std::uint64_t kMaxMaterialize = std::uint64_t{1} << 32;

void check_materializable(std::uint64_t candidates, const char* family) {
    if (candidates > kMaxMaterialize)
        fail(ErrorKind::DomainError, std::string(family) +
                                         ": horizon too large to materialize (" +
                                         std::to_string(candidates) + " candidates)");
}

NaturalSet gen_evens(std::uint64_t horizon) {
    check_materializable(horizon / 2 + 1, "evens");
    std::vector<std::uint64_t> els;
    els.reserve(static_cast<std::size_t>(horizon / 2 + 1));
    for (std::uint64_t v = 0;; v += 2) {
        if (v > horizon) break;
        els.push_back(v);
        if (v > horizon - 2) break;
    }
    return NaturalSet(std::move(els), horizon);
}

NaturalSet gen_all(std::uint64_t horizon) {
    check_materializable(horizon, "all");
    std::vector<std::uint64_t> els;
    els.reserve(static_cast<std::size_t>(horizon + 1));
    for (std::uint64_t v = 0; v <= horizon; ++v) {
        els.push_back(v);
        if (v == horizon) break;
    }
    return NaturalSet(std::move(els), horizon);
}

NaturalSet gen_powers(std::uint64_t base, std::uint64_t horizon) {
    if (base < 2) fail(ErrorKind::MalformedInput, "powers(base) requires base >= 2");
    std::vector<std::uint64_t> els;
    std::uint64_t v = 1;
    while (v <= horizon) {
        els.push_back(v);
        if (v > horizon / base) break;
        v *= base;
    }
    return NaturalSet(std::move(els), horizon);
}

NaturalSet gen_ap(std::uint64_t start, std::uint64_t step, std::uint64_t horizon) {
    if (step < 1) fail(ErrorKind::MalformedInput, "ap(start, step) requires step >= 1");
    if (start <= horizon) check_materializable((horizon - start) / step + 1, "ap");
    std::vector<std::uint64_t> els;
    for (std::uint64_t v = start; v <= horizon;) {
        els.push_back(v);
        if (v > horizon - step) break;
        v += step;
    }
    return NaturalSet(std::move(els), horizon);
}

NaturalSet gen_random(double exponent, std::uint64_t horizon, std::uint64_t seed) {
    if (!(exponent >= 0.0))
        fail(ErrorKind::MalformedInput, "random(e) requires e >= 0");
    check_materializable(horizon, "random");
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> els;
    for (std::uint64_t n = 0; n <= horizon; ++n) {
        double p = (n <= 1) ? 1.0 : std::min(1.0, std::pow(static_cast<double>(n), -exponent));
        if (unit_double(rng) < p) els.push_back(n);
        if (n == horizon) break;
    }
    return NaturalSet(std::move(els), horizon);
}

} // namespace

NaturalSet generate(const std::string& family_spec, std::uint64_t horizon, std::uint64_t seed) {
    if (horizon > kMaxHorizon)
        fail(ErrorKind::DomainError, "horizon above 2^63 is rejected");
    std::string spec = trim(family_spec);
    if (spec == "evens") return gen_evens(horizon);
    if (spec == "all") return gen_all(horizon);

    auto open = spec.find('(');
    if (open == std::string::npos || spec.back() != ')')
        fail(ErrorKind::MalformedInput, "unknown generator family: '" + spec + "'");
    std::string name = trim(spec.substr(0, open));
    std::string args = spec.substr(open + 1, spec.size() - open - 2);

    if (name == "powers") return gen_powers(parse_u64(trim(args), "powers base"), horizon);
    if (name == "ap") {
        auto comma = args.find(',');
        if (comma == std::string::npos)
            fail(ErrorKind::MalformedInput, "ap requires two arguments: ap(start, step)");
        return gen_ap(parse_u64(trim(args.substr(0, comma)), "ap start"),
                      parse_u64(trim(args.substr(comma + 1)), "ap step"), horizon);
    }
    if (name == "random") {
        std::string arg = trim(args);
        char* end = nullptr;
        double e = std::strtod(arg.c_str(), &end);
        if (arg.empty() || !end || *end != '\0')
            fail(ErrorKind::MalformedInput, "random(e): bad exponent '" + arg + "'");
        return gen_random(e, horizon, seed);
    }
    if (name == "from_file") return NaturalSet::from_file(trim(args));
    fail(ErrorKind::MalformedInput, "unknown generator family: '" + name + "'");
}

} // namespace addrep
