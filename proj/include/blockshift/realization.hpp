#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blockshift/core_words.hpp"
#include "blockshift/schedule.hpp"
#include "blockshift/sparse_sets.hpp"

namespace blockshift {

/// u : N -> symbol indices, either an explicit list u(1), u(2), ... or a rule.
class TargetSequence {
public:
    static TargetSequence explicit_list(std::vector<Symbol> values, std::string description = "explicit");
    // `limit` is the largest n the rule is defined for.
    static TargetSequence rule(std::function<Symbol(std::int64_t)> f, std::int64_t limit, std::string description);

    // Throws IncompleteData past the defined range.
    Symbol at(std::int64_t n) const;
    std::int64_t limit() const { return limit_; }
    const std::string& description() const { return description_; }

private:
    TargetSequence() = default;
    std::function<Symbol(std::int64_t)> rule_;
    std::vector<Symbol> values_;
    std::int64_t limit_ = 0;
    std::string description_;
};

/// Fill conventions. Recorded in window headers.
struct FillOptions {
    // Rotates the start of the per-block cycle through A_k (faithful profile).
    std::uint64_t cycle_offset = 0;
};

/// x^(0): u written on S ∩ window, STAR elsewhere.
PartialWindow init_partial(const TargetSequence& u, const SparseSetSpec& s, Interval window);

/// x^(level-1) -> x^(level): completes every level block meeting S.
PartialWindow fill_level(PartialWindow x, int level, const Schedule& schedule, const FillOptions& options = {});

/// x^(depth) on schedule.construction_window(): init_partial, then fill_level for 1..depth.
PartialWindow realize(const TargetSequence& u, const Schedule& schedule, int depth, const FillOptions& options = {});

struct RealizationReport {
    bool passed = true;
    std::int64_t checked = 0;
    std::optional<std::int64_t> first_mismatch;  // the n with x(s_n) != u(n)
    std::string detail;
};

RealizationReport verify_realization(const PartialWindow& x, const TargetSequence& u, const SparseSetSpec& s);

/// Largest n with s_n inside `window` (0 when none).
std::int64_t max_index_in(const SparseSetSpec& s, Interval window);

}  // namespace blockshift
