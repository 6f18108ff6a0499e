#include "blockshift/core_words.hpp"

#include <algorithm>
#include <unordered_set>

#include "blockshift/errors.hpp"

namespace blockshift {

std::string to_string(const Interval& iv) {
    return "[" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) + "]";
}

Alphabet::Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
    if (symbols_.size() < 2) {
        throw InvalidParameter("alphabet needs at least 2 symbols, got \"" + symbols_ + "\"");
    }
    if (symbols_.size() >= kStar) {
        throw InvalidParameter("alphabet too large");
    }
    std::unordered_set<char> seen;
    for (char c : symbols_) {
        if (c < 0x21 || c > 0x7E || c == '*') {
            throw InvalidParameter(std::string("alphabet symbol is not a printable non-'*' character: '") + c + "'");
        }
        if (!seen.insert(c).second) {
            throw InvalidParameter(std::string("duplicate alphabet symbol '") + c + "'");
        }
    }
}

Symbol Alphabet::index_of(char c) const {
    auto pos = symbols_.find(c);
    return pos == std::string::npos ? kStar : static_cast<Symbol>(pos);
}

Word parse_word(const Alphabet& alphabet, std::string_view text) {
    std::vector<Symbol> cells;
    cells.reserve(text.size());
    for (char c : text) {
        Symbol s = alphabet.index_of(c);
        if (s == kStar) {
            throw InvalidParameter(std::string("symbol '") + c + "' not in alphabet \"" + alphabet.symbols() + "\"");
        }
        cells.push_back(s);
    }
    return Word(std::move(cells));
}

std::string render(const Alphabet& alphabet, std::span<const Symbol> cells) {
    std::string out;
    out.reserve(cells.size());
    for (Symbol s : cells) out.push_back(s == kStar ? '*' : alphabet.symbol(s));
    return out;
}

PartialWindow::PartialWindow(Coord offset, std::vector<Symbol> cells)
    : offset_(offset), cells_(std::move(cells)) {
    if (cells_.empty()) throw InvalidParameter("window must hold at least one cell");
}

PartialWindow PartialWindow::stars(Interval range) {
    if (range.empty()) throw InvalidParameter("empty window range");
    return PartialWindow(range.lo, std::vector<Symbol>(static_cast<std::size_t>(range.length()), kStar));
}

PartialWindow PartialWindow::parse(const Alphabet& alphabet, Coord offset, std::string_view text) {
    std::vector<Symbol> cells;
    cells.reserve(text.size());
    for (char c : text) {
        if (c == '*') {
            cells.push_back(kStar);
            continue;
        }
        Symbol s = alphabet.index_of(c);
        if (s == kStar) throw InvalidParameter(std::string("symbol '") + c + "' not in alphabet");
        cells.push_back(s);
    }
    return PartialWindow(offset, std::move(cells));
}

std::span<const Symbol> PartialWindow::view(Interval iv) const {
    if (!range().contains(iv)) throw InvalidParameter("view " + to_string(iv) + " outside window " + to_string(range()));
    return std::span<const Symbol>(cells_).subspan(static_cast<std::size_t>(iv.lo - offset_),
                                                    static_cast<std::size_t>(iv.length()));
}

std::span<Symbol> PartialWindow::mutable_view(Interval iv) {
    if (!range().contains(iv)) throw InvalidParameter("view " + to_string(iv) + " outside window " + to_string(range()));
    return std::span<Symbol>(cells_).subspan(static_cast<std::size_t>(iv.lo - offset_),
                                              static_cast<std::size_t>(iv.length()));
}

bool PartialWindow::fully_defined() const {
    return std::find(cells_.begin(), cells_.end(), kStar) == cells_.end();
}

PartialWindow PartialWindow::slice(Interval iv) const {
    auto v = view(iv);
    return PartialWindow(iv.lo, std::vector<Symbol>(v.begin(), v.end()));
}

Interval block_interval(std::int64_t i, std::int64_t m) {
    if (m < 1 || m % 2 == 0) {
        throw InvalidParameter("block length must be odd and positive, got " + std::to_string(m));
    }
    const std::int64_t half = (m - 1) / 2;
    return {i * m - half, i * m + half};
}

std::int64_t block_index_of(Coord c, std::int64_t m) {
    const std::int64_t shifted = c + (m - 1) / 2;
    // floor division
    std::int64_t q = shifted / m;
    if (shifted % m != 0 && shifted < 0) --q;
    return q;
}

std::pair<std::int64_t, std::int64_t> aligned_block_span(Interval range, std::int64_t m) {
    (void)block_interval(0, m);
    const std::int64_t first = block_index_of(range.lo, m);
    const std::int64_t last = block_index_of(range.hi, m);
    if (block_interval(first, m).lo != range.lo) {
        throw AlignmentError("window start " + std::to_string(range.lo) + " is not a level boundary for m=" +
                                 std::to_string(m),
                             range.lo);
    }
    if (block_interval(last, m).hi != range.hi) {
        throw AlignmentError("window end " + std::to_string(range.hi) + " is not a level boundary for m=" +
                                 std::to_string(m),
                             range.hi);
    }
    return {first, last};
}

std::vector<std::pair<std::int64_t, PartialWindow>> decompose_blocks(const PartialWindow& w, std::int64_t m) {
    auto [first, last] = aligned_block_span(w.range(), m);
    std::vector<std::pair<std::int64_t, PartialWindow>> out;
    out.reserve(static_cast<std::size_t>(last - first + 1));
    for (std::int64_t i = first; i <= last; ++i) out.emplace_back(i, w.slice(block_interval(i, m)));
    return out;
}

std::vector<Coord> occurrences(std::span<const Symbol> pattern, const PartialWindow& text) {
    std::vector<Coord> found;
    const std::size_t p = pattern.size();
    if (p == 0) throw InvalidParameter("empty pattern");
    if (std::find(pattern.begin(), pattern.end(), kStar) != pattern.end()) return found;

    // Knuth-Morris-Pratt; a STAR in the text mismatches every pattern symbol.
    std::vector<std::size_t> fail(p, 0);
    for (std::size_t i = 1, k = 0; i < p; ++i) {
        while (k > 0 && pattern[i] != pattern[k]) k = fail[k - 1];
        if (pattern[i] == pattern[k]) ++k;
        fail[i] = k;
    }
    auto cells = text.cells();
    for (std::size_t i = 0, k = 0; i < cells.size(); ++i) {
        while (k > 0 && cells[i] != pattern[k]) k = fail[k - 1];
        if (cells[i] == pattern[k]) ++k;
        if (k == p) {
            found.push_back(text.offset() + static_cast<Coord>(i + 1 - p));
            k = fail[k - 1];
        }
    }
    return found;
}

}  // namespace blockshift
