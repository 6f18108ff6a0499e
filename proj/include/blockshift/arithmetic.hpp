#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blockshift/analysis.hpp"
#include "blockshift/core_words.hpp"
#include "blockshift/realization.hpp"
#include "blockshift/schedule.hpp"
#include "blockshift/sparse_sets.hpp"

namespace blockshift {

/// mu(n) for 1 <= n <= N from a linear sieve.
class MobiusTable {
public:
    explicit MobiusTable(std::int64_t n);

    std::int64_t limit() const { return static_cast<std::int64_t>(values_.size()) - 1; }
    int mu(std::int64_t n) const;
    // M(N) = sum mu(n)
    std::int64_t mertens() const { return mertens_; }
    // Q(N) = #{n <= N : mu(n) != 0}
    std::int64_t squarefree_count() const { return squarefree_; }
    std::int64_t squarefree_count(std::int64_t n) const;

private:
    std::vector<std::int8_t> values_;
    std::int64_t mertens_ = 0;
    std::int64_t squarefree_ = 0;
};

MobiusTable mobius_sieve(std::int64_t n);

/// Integer weights rho(1), rho(2), ...
struct WeightTable {
    std::string description;
    std::vector<std::int64_t> values;  // values[n - 1] = rho(n)

    std::int64_t at(std::int64_t n) const;
    std::int64_t limit() const { return static_cast<std::int64_t>(values.size()); }

    static WeightTable mobius(const MobiusTable& table);
    static WeightTable zero(std::int64_t n);
    // CSV rows "n,rho"; n must run 1, 2, 3, ... A header row is allowed.
    static WeightTable load_csv(const std::string& path);
};

/// Numeric value of each symbol: '0' -> 0, '1' and '+' -> 1, '-' -> -1, anything else -> its index.
std::vector<std::int64_t> default_symbol_values(const Alphabet& alphabet);

/// u(n) = '1' if mu(n) = 1, else the zero symbol. Alphabet must contain '1'.
TargetSequence mu_indicator_target(std::shared_ptr<const MobiusTable> table, const Alphabet& alphabet);
/// u(n) = sgn mu(n) written with '+' (or '1'), '0', '-'.
TargetSequence mu_sign_target(std::shared_ptr<const MobiusTable> table, const Alphabet& alphabet);

struct CorrelationRow {
    std::int64_t n = 0;
    std::int64_t numerator = 0;  // sum_{i <= n} rho(i) val(x(p(i)))
    double average = 0;
};

struct CorrelationReport {
    std::string weight;
    std::string p;
    std::int64_t first_index = 1;
    std::vector<CorrelationRow> rows;
    // Set when a target was supplied: does sum rho(n) val(x(p(n))) equal sum rho(n) val(u(n)) at every row?
    std::optional<bool> exact_identity;
};

/// 1, 2, 5, 10, 20, 50, ... up to n, always ending with n.
std::vector<std::int64_t> log_ladder(std::int64_t n);

CorrelationReport correlation_average(const PartialWindow& x, const WeightTable& rho, const SparseSetSpec& p,
                                      std::int64_t n, const std::vector<std::int64_t>& symbol_values,
                                      const TargetSequence* target = nullptr);

struct BlockVerdict {
    std::int64_t block = 0;
    AdmissibilityVerdict verdict;
};

/// Everything the correlation demo computes, for reporting.
struct SarnakDemo {
    Schedule schedule;
    FillOptions fill;
    std::string target;
    PartialWindow window;
    RealizationReport realization;
    std::vector<BlockVerdict> admissibility;
    std::optional<MembershipReport> membership;  // aligned level-(depth-1) blocks, faithful only
    std::optional<MinimalityReport> minimality;
    CorrelationReport correlation;
    std::int64_t squarefree = 0;      // Q(N)
    std::int64_t mobius_ones = 0;     // #{n <= N : mu(n) = 1}
};

/// S = squares. Faithful: alphabet "01" with u = 1[mu = 1]. Fast: alphabet "0+-" with u = sgn mu.
SarnakDemo sarnak_demo(Profile profile, int depth, std::int64_t n, std::uint64_t seed = 0,
                       const FillOptions& fill = {});

}  // namespace blockshift
