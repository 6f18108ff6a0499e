#include "blockshift/realization.hpp"

#include <algorithm>

#include "blockshift/errors.hpp"
#include "blockshift/hashing.hpp"

namespace blockshift {

namespace {

constexpr std::int64_t kMaxWindowCells = std::int64_t{1} << 31;

enum class CellState { stars, filled, mixed };

CellState classify(std::span<const Symbol> cell) {
    const auto stars = std::count(cell.begin(), cell.end(), kStar);
    if (stars == 0) return CellState::filled;
    if (stars == static_cast<std::ptrdiff_t>(cell.size())) return CellState::stars;
    return CellState::mixed;
}

std::vector<Coord> element_positions(const SparseSetSpec& s, Interval window) {
    std::vector<Coord> out;
    s.for_each_in(window, [&](std::int64_t, std::int64_t v) {
        out.push_back(v);
        return true;
    });
    return out;
}

}  // namespace

TargetSequence TargetSequence::explicit_list(std::vector<Symbol> values, std::string description) {
    TargetSequence t;
    t.limit_ = static_cast<std::int64_t>(values.size());
    t.values_ = std::move(values);
    t.description_ = std::move(description);
    return t;
}

TargetSequence TargetSequence::rule(std::function<Symbol(std::int64_t)> f, std::int64_t limit,
                                    std::string description) {
    TargetSequence t;
    t.rule_ = std::move(f);
    t.limit_ = limit;
    t.description_ = std::move(description);
    return t;
}

Symbol TargetSequence::at(std::int64_t n) const {
    if (n < 1 || n > limit_) {
        throw IncompleteData("target sequence " + description_ + " undefined at n = " + std::to_string(n) +
                             " (defined for 1.." + std::to_string(limit_) + ")");
    }
    return rule_ ? rule_(n) : values_[static_cast<std::size_t>(n - 1)];
}

std::int64_t max_index_in(const SparseSetSpec& s, Interval window) {
    std::int64_t last = 0;
    s.for_each_in(window, [&](std::int64_t n, std::int64_t) {
        last = n;
        return true;
    });
    return last;
}

PartialWindow init_partial(const TargetSequence& u, const SparseSetSpec& s, Interval window) {
    PartialWindow x = PartialWindow::stars(window);
    s.for_each_in(window, [&](std::int64_t n, std::int64_t v) {
        x.set(v, u.at(n));
        return true;
    });
    return x;
}

PartialWindow fill_level(PartialWindow x, int level, const Schedule& schedule, const FillOptions& options) {
    if (level < 1 || level > schedule.depth()) {
        throw InvalidParameter("fill level " + std::to_string(level) + " outside schedule depth " +
                               std::to_string(schedule.depth()));
    }
    const std::int64_t block_len = schedule.m(level);
    const auto sub_len = static_cast<std::size_t>(schedule.m(level - 1));
    const std::int64_t r = schedule.ratio(level);
    const std::int64_t pillar_share = r / 3;
    const auto& pillar = schedule.levels[static_cast<std::size_t>(level - 1)].pillar.cells;
    const bool faithful = schedule.profile == Profile::faithful;
    const LevelWordSet* cycle = faithful ? schedule.level_words(level - 1) : nullptr;
    if (faithful && !cycle) {
        throw InfeasibleDepth("faithful fill at level " + std::to_string(level) + " needs A_" +
                              std::to_string(level - 1) + " enumerated");
    }

    const auto [first, last] = aligned_block_span(x.range(), block_len);
    const std::vector<Coord> hits = element_positions(schedule.sparse, x.range());
    auto next_hit = hits.begin();

    std::vector<CellState> states(static_cast<std::size_t>(r));
    for (std::int64_t i = first; i <= last; ++i) {
        const Interval block = block_interval(i, block_len);
        while (next_hit != hits.end() && *next_hit < block.lo) ++next_hit;
        const bool meets_s = next_hit != hits.end() && *next_hit <= block.hi;
        auto cells = x.mutable_view(block);

        std::int64_t filled = 0;
        for (std::int64_t j = 0; j < r; ++j) {
            states[static_cast<std::size_t>(j)] = classify(cells.subspan(static_cast<std::size_t>(j) * sub_len, sub_len));
            if (states[static_cast<std::size_t>(j)] == CellState::mixed) {
                throw ConstructionInvariant("level-" + std::to_string(level - 1) + " cell " + std::to_string(j) +
                                                " of block " + std::to_string(i) + " is partially filled",
                                            i);
            }
            if (states[static_cast<std::size_t>(j)] == CellState::filled) ++filled;
        }
        if (!meets_s) {
            if (filled > 0) {
                throw ConstructionInvariant("block " + std::to_string(i) + " is disjoint from S but has filled cells",
                                            i);
            }
            continue;
        }
        if (filled >= pillar_share) {
            throw DensityViolation("block " + std::to_string(i) + " at level " + std::to_string(level) + " has " +
                                       std::to_string(filled) + " filled cells, not fewer than r/3 = " +
                                       std::to_string(pillar_share),
                                   level - 1, block, filled);
        }

        std::int64_t placed_pillars = 0;
        std::uint64_t cycled = 0;
        for (std::int64_t j = 0; j < r; ++j) {
            if (states[static_cast<std::size_t>(j)] != CellState::stars) continue;
            auto dst = cells.subspan(static_cast<std::size_t>(j) * sub_len, sub_len);
            if (placed_pillars < pillar_share) {
                std::copy(pillar.begin(), pillar.end(), dst.begin());
                ++placed_pillars;
            } else if (faithful) {
                auto w = cycle->word((options.cycle_offset + cycled++) % cycle->size());
                std::copy(w.begin(), w.end(), dst.begin());
            } else {
                sample_level_word(schedule, level - 1,
                                  mix_key(schedule.config.seed, static_cast<std::uint64_t>(level),
                                          static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)),
                                  dst);
            }
        }
    }
    return x;
}

PartialWindow realize(const TargetSequence& u, const Schedule& schedule, int depth, const FillOptions& options) {
    if (depth < 1 || depth > schedule.depth()) {
        throw InvalidParameter("realize depth " + std::to_string(depth) + " outside schedule depth " +
                               std::to_string(schedule.depth()));
    }
    const std::int64_t top = schedule.m(depth);
    const Interval window = construction_window(top, schedule.window_hint);
    if (window.length() > kMaxWindowCells) {
        throw InfeasibleDepth("construction window " + to_string(window) + " exceeds " +
                              std::to_string(kMaxWindowCells) + " cells");
    }
    const auto [first, last] = aligned_block_span(window, top);
    for (std::int64_t i = first; i <= last; ++i) {
        const Interval block = block_interval(i, top);
        bool meets = false;
        schedule.sparse.for_each_in(block, [&](std::int64_t, std::int64_t) {
            meets = true;
            return false;
        });
        if (!meets) {
            throw EmptyCore("level-" + std::to_string(depth) + " block " + to_string(block) +
                            " is disjoint from S; build a deeper schedule");
        }
    }

    const std::size_t a = schedule.alphabet.size();
    PartialWindow x = PartialWindow::stars(window);
    schedule.sparse.for_each_in(window, [&](std::int64_t n, std::int64_t v) {
        const Symbol sym = u.at(n);
        if (sym >= a) throw InvalidParameter("u(" + std::to_string(n) + ") is not an alphabet index");
        x.set(v, sym);
        return true;
    });
    for (int k = 1; k <= depth; ++k) x = fill_level(std::move(x), k, schedule, options);
    if (!x.fully_defined()) throw ConstructionInvariant("realized window still holds STAR cells", 0);
    return x;
}

RealizationReport verify_realization(const PartialWindow& x, const TargetSequence& u, const SparseSetSpec& s) {
    RealizationReport report;
    s.for_each_in(x.range(), [&](std::int64_t n, std::int64_t v) {
        ++report.checked;
        if (x.at(v) != u.at(n)) {
            report.passed = false;
            report.first_mismatch = n;
            report.detail = "x(" + std::to_string(v) + ") differs from u(" + std::to_string(n) + ")";
            return false;
        }
        return true;
    });
    if (report.passed) report.detail = std::to_string(report.checked) + " constraints hold";
    return report;
}

}  // namespace blockshift
