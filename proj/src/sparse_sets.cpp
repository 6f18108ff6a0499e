#include "blockshift/sparse_sets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "blockshift/errors.hpp"

namespace blockshift {

namespace {

namespace mp = boost::multiprecision;

constexpr long double kLogGuard = 1e-9L;
constexpr long double kPowGuard = 1e-6L;

std::int64_t floor_nlogn(std::int64_t n) {
    const long double v = static_cast<long double>(n) * std::log(static_cast<long double>(n));
    const long double f = std::floor(v);
    if (v - f >= kLogGuard && f + 1 - v >= kLogGuard) return static_cast<std::int64_t>(f);
    // Too close to an integer to trust extended precision; redo in 50 digits.
    mp::cpp_bin_float_50 big(n);
    big = big * mp::log(big);
    return static_cast<std::int64_t>(mp::floor(big));
}

std::int64_t saturating_pow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > SparseSetSpec::kCoordLimit / base) return SparseSetSpec::kCoordLimit;
        r *= base;
    }
    return r;
}

// floor(n^(num/den)), exact.
std::int64_t floor_rational_power(std::int64_t n, std::int64_t num, std::int64_t den) {
    const long double est = std::pow(static_cast<long double>(n), static_cast<long double>(num) / den);
    if (est >= static_cast<long double>(SparseSetSpec::kCoordLimit)) return SparseSetSpec::kCoordLimit;
    const long double f = std::floor(est);
    const long double slack = kPowGuard * std::max<long double>(1, est * 1e-12L);
    if (est - f >= slack && f + 1 - est >= slack) return static_cast<std::int64_t>(f);
    // Near a boundary: settle v^den <= n^num < (v+1)^den with integers.
    const mp::cpp_int target = mp::pow(mp::cpp_int(n), static_cast<unsigned>(num));
    auto v = static_cast<std::int64_t>(f);
    while (v > 0 && mp::pow(mp::cpp_int(v), static_cast<unsigned>(den)) > target) --v;
    while (mp::pow(mp::cpp_int(v + 1), static_cast<unsigned>(den)) <= target) ++v;
    return v;
}

void check_increasing(const std::vector<std::int64_t>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] <= 0) throw InvalidParameter("sparse set elements must be positive");
        if (i > 0 && values[i] <= values[i - 1]) {
            throw InvalidParameter("sparse set list must be strictly increasing at position " + std::to_string(i + 1));
        }
    }
}

std::int64_t parse_int(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw InvalidParameter("cannot parse " + what + " from \"" + text + "\"");
    }
}

// Scans candidate windows of `range` of length `window`: the window starting at
// range.lo and every window ending on an element of S. Every other window is
// dominated by one of these. `visit` returns false to stop the scan.
void scan_windows(const SparseSetSpec& s, std::int64_t window, Interval range,
                  const std::function<bool(Interval, std::int64_t)>& visit) {
    if (window < 1) throw InvalidParameter("window length must be positive");
    if (range.length() < window) {
        throw InvalidParameter("range " + to_string(range) + " shorter than window length " + std::to_string(window));
    }
    // Surfaces IncompleteData for a prefix that stops short of the range.
    s.for_each_in(range, [](std::int64_t, std::int64_t) { return false; });
    const std::int64_t first_end = range.lo + window - 1;
    const auto rank = [&](Coord x) { return s.index_lower_bound(std::max<Coord>(x, 1)); };
    if (!visit({range.lo, first_end}, first_end < 1 ? 0 : rank(first_end + 1) - rank(range.lo))) return;
    s.for_each_in({first_end + 1, range.hi}, [&](std::int64_t n, std::int64_t e) {
        return visit({e - window + 1, e}, n - rank(e - window + 1) + 1);
    });
}

}  // namespace

SparseSetSpec SparseSetSpec::explicit_complete(std::vector<std::int64_t> values) {
    check_increasing(values);
    SparseSetSpec s;
    s.kind_ = Kind::explicit_list;
    s.values_ = std::move(values);
    return s;
}

SparseSetSpec SparseSetSpec::explicit_prefix(std::vector<std::int64_t> values) {
    SparseSetSpec s = explicit_complete(std::move(values));
    s.prefix_ = true;
    return s;
}

SparseSetSpec SparseSetSpec::monomial(int degree) {
    if (degree < 1) throw InvalidParameter("monomial degree must be >= 1");
    SparseSetSpec s;
    s.kind_ = Kind::monomial;
    s.degree_ = degree;
    return s;
}

SparseSetSpec SparseSetSpec::power(std::int64_t num, std::int64_t den) {
    if (den < 1 || num <= den) throw InvalidParameter("power exponent must be a rational > 1");
    const std::int64_t g = std::gcd(num, den);
    if (num / g > 1000) throw InvalidParameter("power exponent numerator too large");
    SparseSetSpec s;
    s.kind_ = Kind::power;
    s.num_ = num / g;
    s.den_ = den / g;
    return s;
}

SparseSetSpec SparseSetSpec::nlogn() {
    SparseSetSpec s;
    s.kind_ = Kind::nlogn;
    return s;
}

SparseSetSpec SparseSetSpec::evens() {
    SparseSetSpec s;
    s.kind_ = Kind::evens;
    return s;
}

std::int64_t SparseSetSpec::value(std::int64_t n) const {
    if (n < first_index()) throw InvalidParameter("sparse set index " + std::to_string(n) + " below first index");
    switch (kind_) {
        case Kind::explicit_list:
            if (n > static_cast<std::int64_t>(values_.size())) {
                if (!prefix_) return kCoordLimit;
                throw IncompleteData("explicit sparse list has no element " + std::to_string(n));
            }
            return values_[static_cast<std::size_t>(n - 1)];
        case Kind::monomial:
            return saturating_pow(n, degree_);
        case Kind::power:
            return floor_rational_power(n, num_, den_);
        case Kind::nlogn:
            return floor_nlogn(n);
        case Kind::evens:
            return n > kCoordLimit / 2 ? kCoordLimit : 2 * n;
    }
    return kCoordLimit;
}

std::int64_t SparseSetSpec::index_lower_bound(std::int64_t x) const {
    if (kind_ == Kind::explicit_list) {
        auto it = std::lower_bound(values_.begin(), values_.end(), x);
        return static_cast<std::int64_t>(it - values_.begin()) + 1;
    }
    std::int64_t lo = first_index();
    if (value(lo) >= x) return lo;
    std::int64_t hi = lo + 1;
    while (value(hi) < x) {
        lo = hi;
        hi *= 2;
    }
    // invariant: value(lo) < x <= value(hi)
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (value(mid) < x ? lo : hi) = mid;
    }
    return hi;
}

void SparseSetSpec::for_each_in(Interval iv, const std::function<bool(std::int64_t, std::int64_t)>& f) const {
    if (iv.empty() || iv.hi < 1) return;
    const std::int64_t lo = std::max<std::int64_t>(iv.lo, 1);
    const std::int64_t hi = std::min(iv.hi, kCoordLimit - 1);
    if (kind_ == Kind::explicit_list) {
        if (prefix_ && (values_.empty() || values_.back() < hi)) {
            throw IncompleteData("explicit sparse list ends at " +
                                 (values_.empty() ? std::string("nothing") : std::to_string(values_.back())) +
                                 " before interval end " + std::to_string(hi) + "; supply a longer list");
        }
        auto it = std::lower_bound(values_.begin(), values_.end(), lo);
        for (; it != values_.end() && *it <= hi; ++it) {
            if (!f(static_cast<std::int64_t>(it - values_.begin()) + 1, *it)) return;
        }
        return;
    }
    for (std::int64_t n = index_lower_bound(lo);; ++n) {
        const std::int64_t v = value(n);
        if (v > hi) return;
        if (!f(n, v)) return;
    }
}

std::string SparseSetSpec::describe() const {
    switch (kind_) {
        case Kind::explicit_list: {
            if (!origin_.empty()) return origin_;
            std::string out = prefix_ ? "prefix:" : "list:";
            for (std::size_t i = 0; i < values_.size(); ++i) {
                if (i) out += ',';
                out += std::to_string(values_[i]);
            }
            return out;
        }
        case Kind::monomial:
            return degree_ == 2 ? "squares" : "monomial:" + std::to_string(degree_);
        case Kind::power:
            return "power:" + std::to_string(num_) + "/" + std::to_string(den_);
        case Kind::nlogn:
            return "nlogn";
        case Kind::evens:
            return "evens";
    }
    return "?";
}

SparseSetSpec load_sparse_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open sparse list " + path);
    std::vector<std::int64_t> values;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string token;
        if (!(fields >> token)) continue;
        values.push_back(parse_int(token, "sparse list element"));
        if (fields >> token) throw InvalidParameter("sparse list line holds more than one integer: " + line);
    }
    SparseSetSpec s = SparseSetSpec::explicit_prefix(std::move(values));
    s.origin_ = "file:" + path;
    return s;
}

SparseSetSpec parse_sparse_spec(const std::string& text) {
    if (text == "squares") return SparseSetSpec::squares();
    if (text == "nlogn") return SparseSetSpec::nlogn();
    if (text == "evens") return SparseSetSpec::evens();
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "monomial") return SparseSetSpec::monomial(static_cast<int>(parse_int(tail, "monomial degree")));
    if (head == "power") {
        const auto slash = tail.find('/');
        if (slash == std::string::npos) return SparseSetSpec::power(parse_int(tail, "power exponent"), 1);
        return SparseSetSpec::power(parse_int(tail.substr(0, slash), "power numerator"),
                                    parse_int(tail.substr(slash + 1), "power denominator"));
    }
    if (head == "list" || head == "prefix") {
        std::vector<std::int64_t> values;
        std::stringstream ss(tail);
        std::string item;
        while (std::getline(ss, item, ',')) values.push_back(parse_int(item, "list element"));
        return head == "list" ? SparseSetSpec::explicit_complete(std::move(values))
                              : SparseSetSpec::explicit_prefix(std::move(values));
    }
    if (head == "file") return load_sparse_list(tail);
    throw InvalidParameter("unknown sparse set \"" + text + "\"");
}

std::vector<std::pair<std::int64_t, std::int64_t>> elements_in(const SparseSetSpec& s, Interval iv) {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    s.for_each_in(iv, [&](std::int64_t n, std::int64_t v) {
        out.emplace_back(n, v);
        return true;
    });
    return out;
}

WindowCount max_window_count(const SparseSetSpec& s, std::int64_t window, Interval range) {
    WindowCount best{-1, {}};
    scan_windows(s, window, range, [&](Interval w, std::int64_t count) {
        if (count > best.count) best = {count, w};
        return true;
    });
    return best;
}

std::optional<WindowCount> first_window_at_least(const SparseSetSpec& s, std::int64_t window, Interval range,
                                                 std::int64_t limit) {
    std::optional<WindowCount> hit;
    scan_windows(s, window, range, [&](Interval w, std::int64_t count) {
        if (count >= limit) {
            hit = WindowCount{count, w};
            return false;
        }
        return true;
    });
    return hit;
}

bool sparsity_ok(const SparseSetSpec& s, std::int64_t window, std::int64_t m_k, Interval range) {
    if (m_k < 1 || window % (3 * m_k) != 0) {
        throw InvalidParameter("window " + std::to_string(window) + " is not a multiple of 3*" + std::to_string(m_k));
    }
    // count < window / (3 m_k)  <=>  count < window / (3 m_k) as an exact integer quotient
    return !first_window_at_least(s, window, range, window / (3 * m_k)).has_value();
}

boost::rational<std::int64_t> density_estimate(const SparseSetSpec& s, std::int64_t window, Interval range) {
    return {max_window_count(s, window, range).count, window};
}

}  // namespace blockshift
