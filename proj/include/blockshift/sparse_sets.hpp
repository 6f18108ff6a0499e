#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "blockshift/core_words.hpp"

namespace blockshift {

/// A strictly increasing set S = {s_n} of positive integers, given by rule or by list.
///
/// Rule kinds index from n = 1 except nlogn, whose first element is s_2 = 1.
/// Explicit lists are either complete (the list is all of S) or a prefix of
/// some longer set; querying a prefix past its last element is an error.
class SparseSetSpec {
public:
    enum class Kind { explicit_list, monomial, power, nlogn, evens };

    static SparseSetSpec explicit_complete(std::vector<std::int64_t> values);
    static SparseSetSpec explicit_prefix(std::vector<std::int64_t> values);
    static SparseSetSpec monomial(int degree);
    static SparseSetSpec squares() { return monomial(2); }
    // s_n = floor(n^(num/den)) with num/den > 1.
    static SparseSetSpec power(std::int64_t num, std::int64_t den);
    static SparseSetSpec nlogn();
    static SparseSetSpec evens();

    Kind kind() const { return kind_; }
    std::int64_t first_index() const { return kind_ == Kind::nlogn ? 2 : 1; }

    // s_n for n >= first_index(). Values beyond kCoordLimit saturate to it.
    std::int64_t value(std::int64_t n) const;

    // Smallest n >= first_index() with s_n >= x (for explicit prefixes the
    // result may be one past the list end).
    std::int64_t index_lower_bound(std::int64_t x) const;

    // Calls f(n, s_n) for every s_n in iv in increasing order; stops early when f returns false.
    void for_each_in(Interval iv, const std::function<bool(std::int64_t, std::int64_t)>& f) const;

    // Canonical text form, parseable by parse_sparse_spec. Explicit prefixes read from
    // a file keep their "file:PATH" origin.
    std::string describe() const;

    const std::vector<std::int64_t>& explicit_values() const { return values_; }
    bool is_prefix() const { return prefix_; }

    static constexpr std::int64_t kCoordLimit = std::int64_t{1} << 62;

private:
    friend SparseSetSpec load_sparse_list(const std::string& path);
    SparseSetSpec() = default;

    Kind kind_ = Kind::evens;
    int degree_ = 0;
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::vector<std::int64_t> values_;
    bool prefix_ = false;
    std::string origin_;
};

/// Parses "squares", "monomial:D", "power:P/Q", "nlogn", "evens", "list:a,b,c"
/// (complete explicit set) or "file:PATH" (explicit prefix, one integer per line).
SparseSetSpec parse_sparse_spec(const std::string& text);

/// One-integer-per-line list, '#' starts a comment. Must be strictly increasing and positive.
SparseSetSpec load_sparse_list(const std::string& path);

std::vector<std::pair<std::int64_t, std::int64_t>> elements_in(const SparseSetSpec& s, Interval iv);

struct WindowCount {
    std::int64_t count = 0;
    Interval witness;
};

/// Densest length-L subwindow of `range`, with a witness.
WindowCount max_window_count(const SparseSetSpec& s, std::int64_t window, Interval range);

/// First length-L subwindow of `range` (scanning left to right) holding at least
/// `limit` elements of S, if any.
std::optional<WindowCount> first_window_at_least(const SparseSetSpec& s, std::int64_t window, Interval range,
                                                 std::int64_t limit);

/// |S ∩ I| < L / (3 m_k) for every length-L window I in `range`. L must be a multiple of 3 m_k.
bool sparsity_ok(const SparseSetSpec& s, std::int64_t window, std::int64_t m_k, Interval range);

boost::rational<std::int64_t> density_estimate(const SparseSetSpec& s, std::int64_t window, Interval range);

}  // namespace blockshift
