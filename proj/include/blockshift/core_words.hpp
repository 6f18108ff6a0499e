#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace blockshift {

using Coord = std::int64_t;
using Symbol = std::uint8_t;

// Undefined cell. Never a valid symbol index.
inline constexpr Symbol kStar = 0xFF;

// Closed integer interval [lo, hi]. Empty when lo > hi.
struct Interval {
    Coord lo = 0;
    Coord hi = -1;

    bool empty() const { return lo > hi; }
    std::int64_t length() const { return empty() ? 0 : hi - lo + 1; }
    bool contains(Coord c) const { return lo <= c && c <= hi; }
    bool contains(const Interval& other) const {
        return other.empty() || (lo <= other.lo && other.hi <= hi);
    }
    friend bool operator==(const Interval&, const Interval&) = default;
};

std::string to_string(const Interval& iv);

/// Ordered set of printable ASCII symbols. Index 0 is the zero symbol.
class Alphabet {
public:
    explicit Alphabet(std::string symbols);

    std::size_t size() const { return symbols_.size(); }
    char symbol(Symbol index) const { return symbols_.at(index); }
    const std::string& symbols() const { return symbols_; }
    static constexpr Symbol zero() { return 0; }

    // Index of `c`, or kStar when `c` is not in the alphabet.
    Symbol index_of(char c) const;

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::string symbols_;
};

/// Finite word of symbol indices.
struct Word {
    std::vector<Symbol> cells;

    Word() = default;
    explicit Word(std::vector<Symbol> c) : cells(std::move(c)) {}

    std::size_t size() const { return cells.size(); }
    std::span<const Symbol> view() const { return cells; }
    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word&, const Word&) = default;
};

Word parse_word(const Alphabet& alphabet, std::string_view text);
std::string render(const Alphabet& alphabet, std::span<const Symbol> cells);

/// Integer-indexed window over symbols-or-STAR. Coordinate c lives at cells[c - offset].
class PartialWindow {
public:
    PartialWindow(Coord offset, std::vector<Symbol> cells);
    // All-STAR window covering `range`.
    static PartialWindow stars(Interval range);
    // Parses '*' as STAR and every other character through the alphabet.
    static PartialWindow parse(const Alphabet& alphabet, Coord offset, std::string_view text);

    Coord offset() const { return offset_; }
    std::size_t size() const { return cells_.size(); }
    Interval range() const { return {offset_, offset_ + static_cast<Coord>(cells_.size()) - 1}; }

    Symbol at(Coord c) const { return cells_[static_cast<std::size_t>(c - offset_)]; }
    void set(Coord c, Symbol s) { cells_[static_cast<std::size_t>(c - offset_)] = s; }

    std::span<const Symbol> cells() const { return cells_; }
    std::span<Symbol> mutable_cells() { return cells_; }
    // Cells of the sub-range `iv`, which must lie inside range().
    std::span<const Symbol> view(Interval iv) const;
    std::span<Symbol> mutable_view(Interval iv);

    bool fully_defined() const;
    PartialWindow slice(Interval iv) const;

    friend bool operator==(const PartialWindow&, const PartialWindow&) = default;

private:
    Coord offset_;
    std::vector<Symbol> cells_;
};

/// Centered level block: the m integers around i*m. `m` must be odd and positive.
Interval block_interval(std::int64_t i, std::int64_t m);

/// Index of the level block of length `m` that contains `c`.
std::int64_t block_index_of(Coord c, std::int64_t m);

/// Splits an aligned window into consecutive length-m blocks, ascending.
std::vector<std::pair<std::int64_t, PartialWindow>> decompose_blocks(const PartialWindow& w, std::int64_t m);

/// Block indices covering an aligned range; throws AlignmentError otherwise.
std::pair<std::int64_t, std::int64_t> aligned_block_span(Interval range, std::int64_t m);

/// Start coordinates of every fully-defined occurrence of `pattern` in `text`.
std::vector<Coord> occurrences(std::span<const Symbol> pattern, const PartialWindow& text);

}  // namespace blockshift
