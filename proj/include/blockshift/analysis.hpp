#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "blockshift/core_words.hpp"
#include "blockshift/schedule.hpp"

namespace blockshift {

/// Distinct-subword counts of a finite window. Every count is a window lower
/// bound on |L_n(X)|, never the language count itself.
struct ComplexityReport {
    std::string source;
    std::int64_t window_length = 0;
    std::map<int, std::int64_t> counts;  // n -> distinct length-n subwords
    // m -> distinct subwords starting on a block boundary of length m
    std::map<std::int64_t, std::int64_t> aligned;
};

/// Exact counts for n = 1..n_max by iterated rank refinement. The window must be fully defined.
ComplexityReport complexity_profile(const PartialWindow& x, int n_max, std::string source = {});

/// Distinct aligned blocks of length m (window must be aligned to m).
std::int64_t aligned_distinct_blocks(const PartialWindow& x, std::int64_t m);

struct MembershipReport {
    std::int64_t blocks = 0;
    std::int64_t members = 0;
    std::int64_t distinct = 0;
    std::optional<std::int64_t> first_outsider;  // block index
};

/// Checks every aligned level-k block of x against the enumerated A_k.
MembershipReport aligned_membership(const PartialWindow& x, const Schedule& schedule, int k);

struct EntropyBoundRow {
    int k = 0;
    double log_m_over_m = 0;
    bool extrapolated = false;  // k beyond the built depth
    double bound = 0;
};

/// C = max(1, (4/3) b_1) with b_1 = ln|A_1| / m_1 (upper value).
double decay_constant(const Schedule& schedule);

/// (ln m_k)/m_k + 2 C (3/4)^k for k = 0..k_max; beyond the built depth D the
/// first term is replaced by (ln m_D)/m_D.
std::vector<EntropyBoundRow> entropy_bound_series(const Schedule& schedule, int k_max);

struct DecayRow {
    int k = 0;
    double b = 0;          // ln|A_k|/m_k, upper value
    double corrected = 0;  // C (3/4)^k
    double original = 0;   // ln|A| (3/4)^k
    bool holds_corrected = false;
    bool holds_original = false;
};

std::vector<DecayRow> decay_check(const Schedule& schedule);

struct RecurrenceRow {
    int k = 0;       // step k -> k+1
    double lhs = 0;  // ln|A_{k+1}| / m_{k+1}, upper value
    double rhs = 0;  // ln 2 / m_k + (2/3) ln|A_k| / m_k
    bool holds = false;
};

// Relative slack allowed for outward rounding of the log bounds.
inline constexpr double kRecurrenceSlack = 1e-9;

std::vector<RecurrenceRow> recurrence_check(const Schedule& schedule);

struct WitnessCheck {
    std::string name;  // "pillar-containment", "gap-bound", "pillar-coverage"
    int k = 0;
    std::string status;  // "pass", "fail", "waived"
    std::int64_t observed = 0;
    std::int64_t limit = 0;
    std::string detail;
};

struct MinimalityReport {
    std::vector<WitnessCheck> checks;
    bool passed() const;
};

MinimalityReport minimality_witnesses(const PartialWindow& x, const Schedule& schedule, int depth);

/// alpha ln(a) / 2, the entropy forced by realizing every u along a density-alpha set.
double positive_density_bound(boost::rational<std::int64_t> alpha, int alphabet_size);

/// a^s_count: words of length L forced into the language when s_count cells are free.
BigInt realization_forced_count(std::int64_t length, std::int64_t s_count, int alphabet_size);

}  // namespace blockshift
