#include "blockshift/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "blockshift/errors.hpp"

namespace blockshift {

namespace {

std::string_view as_chars(std::span<const Symbol> w) {
    return {reinterpret_cast<const char*>(w.data()), w.size()};
}

// Open-addressing map from 64-bit keys to dense ids, for rank refinement.
class DenseIds {
public:
    explicit DenseIds(std::size_t expected) {
        std::size_t cap = 16;
        while (cap < expected * 2) cap <<= 1;
        keys_.assign(cap, kEmpty);
        ids_.assign(cap, 0);
        mask_ = cap - 1;
    }

    std::uint32_t id(std::uint64_t key) {
        if (2 * (static_cast<std::size_t>(next_) + 1) > keys_.size()) grow();
        std::size_t slot = slot_of(key);
        while (keys_[slot] != kEmpty) {
            if (keys_[slot] == key) return ids_[slot];
            slot = (slot + 1) & mask_;
        }
        keys_[slot] = key;
        ids_[slot] = next_;
        return next_++;
    }
    std::uint32_t size() const { return next_; }

private:
    std::size_t slot_of(std::uint64_t key) const {
        return static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ULL) >> 20) & mask_;
    }

    void grow() {
        std::vector<std::uint64_t> old_keys(keys_.size() * 2, kEmpty);
        std::vector<std::uint32_t> old_ids(ids_.size() * 2, 0);
        old_keys.swap(keys_);
        old_ids.swap(ids_);
        mask_ = keys_.size() - 1;
        for (std::size_t i = 0; i < old_keys.size(); ++i) {
            if (old_keys[i] == kEmpty) continue;
            std::size_t slot = slot_of(old_keys[i]);
            while (keys_[slot] != kEmpty) slot = (slot + 1) & mask_;
            keys_[slot] = old_keys[i];
            ids_[slot] = old_ids[i];
        }
    }

    static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> ids_;
    std::size_t mask_ = 0;
    std::uint32_t next_ = 0;
};

}  // namespace

ComplexityReport complexity_profile(const PartialWindow& x, int n_max, std::string source) {
    if (!x.fully_defined()) throw InvalidParameter("complexity needs a fully defined window (found STAR)");
    if (n_max < 1) throw InvalidParameter("n_max must be >= 1");
    ComplexityReport report;
    report.source = std::move(source);
    report.window_length = static_cast<std::int64_t>(x.size());

    auto cells = x.cells();
    const std::size_t len = cells.size();
    // rank[i] identifies the length-n subword starting at i; equal ranks iff equal subwords
    std::vector<std::uint32_t> rank(cells.begin(), cells.end());
    {
        std::vector<bool> seen(256, false);
        std::int64_t distinct = 0;
        for (Symbol s : cells) {
            if (!seen[s]) {
                seen[s] = true;
                ++distinct;
            }
        }
        report.counts[1] = distinct;
    }
    for (int n = 1; n < n_max && static_cast<std::size_t>(n) < len; ++n) {
        const std::size_t positions = len - static_cast<std::size_t>(n);
        DenseIds ids(1024);
        for (std::size_t i = 0; i < positions; ++i) {
            rank[i] = ids.id((static_cast<std::uint64_t>(rank[i]) << 8) | cells[i + static_cast<std::size_t>(n)]);
        }
        rank.resize(positions);
        report.counts[n + 1] = ids.size();
    }
    for (int n = static_cast<int>(len) + 1; n <= n_max; ++n) report.counts[n] = 0;
    return report;
}

std::int64_t aligned_distinct_blocks(const PartialWindow& x, std::int64_t m) {
    auto [first, last] = aligned_block_span(x.range(), m);
    std::unordered_set<std::string_view> seen;
    seen.reserve(static_cast<std::size_t>(last - first + 1));
    for (std::int64_t i = first; i <= last; ++i) seen.insert(as_chars(x.view(block_interval(i, m))));
    return static_cast<std::int64_t>(seen.size());
}

MembershipReport aligned_membership(const PartialWindow& x, const Schedule& schedule, int k) {
    const LevelWordSet* table = schedule.level_words(k);
    if (!table) throw InfeasibleDepth("A_" + std::to_string(k) + " is not enumerated");
    const std::int64_t m = schedule.m(k);
    auto [first, last] = aligned_block_span(x.range(), m);
    MembershipReport report;
    std::vector<bool> hit(table->size(), false);
    for (std::int64_t i = first; i <= last; ++i) {
        ++report.blocks;
        auto idx = table->find(x.view(block_interval(i, m)));
        if (!idx) {
            if (!report.first_outsider) report.first_outsider = i;
            continue;
        }
        ++report.members;
        if (!hit[*idx]) {
            hit[*idx] = true;
            ++report.distinct;
        }
    }
    return report;
}

double decay_constant(const Schedule& schedule) {
    if (schedule.depth() < 1) return 1.0;
    const double b1 = schedule.levels[1].card.log_upper / static_cast<double>(schedule.m(1));
    return std::max(1.0, 4.0 / 3.0 * b1);
}

std::vector<EntropyBoundRow> entropy_bound_series(const Schedule& schedule, int k_max) {
    const double c = decay_constant(schedule);
    const int depth = schedule.depth();
    std::vector<EntropyBoundRow> rows;
    for (int k = 0; k <= k_max; ++k) {
        EntropyBoundRow row;
        row.k = k;
        row.extrapolated = k > depth;
        // (ln x)/x decreases for x >= 3 and m_{k+1} >= 3 m_k, so m_D's value majorizes deeper levels
        const auto m = static_cast<double>(schedule.m(std::min(k, depth)));
        row.log_m_over_m = std::log(m) / m;
        row.bound = row.log_m_over_m + 2.0 * c * std::pow(0.75, k);
        rows.push_back(row);
    }
    return rows;
}

std::vector<DecayRow> decay_check(const Schedule& schedule) {
    const double c = decay_constant(schedule);
    const double ln_a = std::log(static_cast<double>(schedule.alphabet.size()));
    std::vector<DecayRow> rows;
    for (int k = 1; k <= schedule.depth(); ++k) {
        DecayRow row;
        row.k = k;
        row.b = schedule.levels[static_cast<std::size_t>(k)].card.log_upper / static_cast<double>(schedule.m(k));
        row.corrected = c * std::pow(0.75, k);
        row.original = ln_a * std::pow(0.75, k);
        row.holds_corrected = row.b <= row.corrected * (1 + kRecurrenceSlack);
        row.holds_original = row.b <= row.original;
        rows.push_back(row);
    }
    return rows;
}

std::vector<RecurrenceRow> recurrence_check(const Schedule& schedule) {
    std::vector<RecurrenceRow> rows;
    for (int k = 0; k < schedule.depth(); ++k) {
        RecurrenceRow row;
        row.k = k;
        const auto m_k = static_cast<double>(schedule.m(k));
        row.lhs = schedule.levels[static_cast<std::size_t>(k + 1)].card.log_upper / static_cast<double>(schedule.m(k + 1));
        row.rhs = std::numbers::ln2 / m_k + (2.0 / 3.0) * schedule.levels[static_cast<std::size_t>(k)].card.log_upper / m_k;
        row.holds = row.lhs <= row.rhs * (1 + kRecurrenceSlack);
        rows.push_back(row);
    }
    return rows;
}

bool MinimalityReport::passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const WitnessCheck& c) { return c.status == "fail"; });
}

MinimalityReport minimality_witnesses(const PartialWindow& x, const Schedule& schedule, int depth) {
    if (depth < 1 || depth > schedule.depth()) throw InvalidParameter("minimality depth outside schedule");
    if (!x.fully_defined()) throw InvalidParameter("minimality witnesses need a fully defined window");
    (void)aligned_block_span(x.range(), schedule.m(depth));

    MinimalityReport report;
    for (int k = 0; k < depth; ++k) {
        const auto& pillar = schedule.levels[static_cast<std::size_t>(k)].pillar;
        const std::int64_t m_k = schedule.m(k);
        const std::int64_t m_next = schedule.m(k + 1);
        const std::vector<Coord> hits = occurrences(pillar.view(), x);

        WitnessCheck contain{"pillar-containment", k, "pass", 0, 0, ""};
        auto [first, last] = aligned_block_span(x.range(), m_next);
        for (std::int64_t i = first; i <= last; ++i) {
            const Interval b = block_interval(i, m_next);
            ++contain.limit;
            auto it = std::lower_bound(hits.begin(), hits.end(), b.lo);
            if (it != hits.end() && *it + m_k - 1 <= b.hi) {
                ++contain.observed;
            } else if (contain.status == "pass") {
                contain.status = "fail";
                contain.detail = "level-" + std::to_string(k + 1) + " block " + std::to_string(i) + " lacks w_" +
                                 std::to_string(k);
            }
        }
        if (contain.status == "pass") {
            contain.detail = "all " + std::to_string(contain.limit) + " level-" + std::to_string(k + 1) +
                             " blocks contain w_" + std::to_string(k);
        }
        report.checks.push_back(contain);

        WitnessCheck gap{"gap-bound", k, "pass", 0, 2 * m_next, ""};
        for (std::size_t j = 1; j < hits.size(); ++j) gap.observed = std::max(gap.observed, hits[j] - hits[j - 1]);
        if (hits.empty()) {
            gap.status = "fail";
            gap.detail = "w_" + std::to_string(k) + " does not occur";
        } else {
            if (gap.observed > gap.limit) gap.status = "fail";
            gap.detail = std::to_string(hits.size()) + " occurrences of w_" + std::to_string(k) + ", max gap " +
                         std::to_string(gap.observed);
        }
        report.checks.push_back(gap);
    }

    for (int k = 0; k < depth && k <= 1; ++k) {
        WitnessCheck cover{"pillar-coverage", k, "pass", 0, 0, ""};
        const LevelWordSet* table = schedule.level_words(k);
        if (schedule.profile == Profile::fast) {
            cover.status = "waived";
            cover.detail = "fast profile drops the every-word condition";
        } else if (!table) {
            cover.status = "fail";
            cover.detail = "A_" + std::to_string(k) + " not enumerated";
        } else {
            const auto& next = schedule.levels[static_cast<std::size_t>(k + 1)].pillar;
            const auto m_k = static_cast<std::size_t>(schedule.m(k));
            std::vector<bool> hit(table->size(), false);
            for (std::size_t off = 0; off + m_k <= next.size(); off += m_k) {
                auto idx = table->find(next.view().subspan(off, m_k));
                if (idx && !hit[*idx]) {
                    hit[*idx] = true;
                    ++cover.observed;
                }
            }
            cover.limit = static_cast<std::int64_t>(table->size());
            if (cover.observed != cover.limit) cover.status = "fail";
            cover.detail = std::to_string(cover.observed) + " of " + std::to_string(cover.limit) + " level-" +
                           std::to_string(k) + " words are aligned blocks of w_" + std::to_string(k + 1);
        }
        report.checks.push_back(cover);
    }
    return report;
}

double positive_density_bound(boost::rational<std::int64_t> alpha, int alphabet_size) {
    if (alpha < 0 || alpha > 1) throw InvalidParameter("density must lie in [0, 1]");
    if (alphabet_size < 2) throw InvalidParameter("alphabet size must be >= 2");
    return boost::rational_cast<double>(alpha) * std::log(static_cast<double>(alphabet_size)) / 2.0;
}

BigInt realization_forced_count(std::int64_t length, std::int64_t s_count, int alphabet_size) {
    if (s_count < 0 || s_count > length) throw InvalidParameter("element count must lie in [0, L]");
    if (alphabet_size < 2) throw InvalidParameter("alphabet size must be >= 2");
    return boost::multiprecision::pow(BigInt(alphabet_size), static_cast<unsigned>(s_count));
}

}  // namespace blockshift
