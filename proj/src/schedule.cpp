#include "blockshift/schedule.hpp"

#include <algorithm>
#include <bitset>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <unordered_set>

#include "blockshift/errors.hpp"
#include "blockshift/hashing.hpp"

namespace blockshift {

namespace {

// Keys the fast-profile pillar samples apart from fill samples.
constexpr std::uint64_t kPillarTag = 0x50494C4C4152ULL;

// Exact counting is attempted only below these sizes.
constexpr double kExactBitsLimit = 65536;
constexpr double kExactTermsLimit = 4e6;

double round_up(double x) { return std::nextafter(x + std::abs(x) * 1e-14, std::numeric_limits<double>::infinity()); }
double round_down(double x) { return std::nextafter(x - std::abs(x) * 1e-14, -std::numeric_limits<double>::infinity()); }

double log_binomial(double n, double k) { return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1); }

std::string_view as_chars(std::span<const Symbol> w) {
    return {reinterpret_cast<const char*>(w.data()), w.size()};
}

// Lower bound for ln(a - 1) given ln a >= log_a.
double log_minus_one_lower(double log_a) {
    if (log_a <= 0) return -std::numeric_limits<double>::infinity();
    return round_down(log_a + std::log1p(-std::exp(-log_a)));
}

BigInt surjections(std::int64_t n, std::int64_t b) {
    // inclusion-exclusion over the b targets; 0^0 = 1
    BigInt total = 0;
    BigInt binom = 1;
    for (std::int64_t j = 0; j <= b; ++j) {
        BigInt term = binom * boost::multiprecision::pow(BigInt(b - j), static_cast<unsigned>(n));
        if (j % 2 == 0) {
            total += term;
        } else {
            total -= term;
        }
        binom = binom * (b - j) / (j + 1);
    }
    return total;
}

void check_same_length(std::span<const Symbol> w, std::int64_t m, int level) {
    if (static_cast<std::int64_t>(w.size()) != m) {
        throw InvalidParameter("word of length " + std::to_string(w.size()) + " checked at level " +
                               std::to_string(level) + " where m = " + std::to_string(m));
    }
}

Tri combine(Tri acc, Tri next) {
    if (acc == Tri::no || next == Tri::no) return Tri::no;
    if (acc == Tri::undetermined || next == Tri::undetermined) return Tri::undetermined;
    return Tri::yes;
}

AdmissibilityVerdict check_block(std::span<const Symbol> w, int level, const Schedule& s, bool explain) {
    AdmissibilityVerdict v;
    const std::size_t a = s.alphabet.size();
    if (level == 0) {
        v.blocks = w[0] < a ? Tri::yes : Tri::no;
        v.pillar_share = true;
        v.every_word = EveryWord::satisfied;
        v.result = v.blocks;
        if (explain && v.result == Tri::no) v.reason = "cell is not an alphabet symbol";
        return v;
    }
    const std::int64_t r = s.ratio(level);
    const auto len = static_cast<std::size_t>(s.m(level - 1));
    const auto pillar = s.levels[static_cast<std::size_t>(level - 1)].pillar.view();

    std::bitset<256> seen_symbols;
    std::unordered_set<std::string_view> seen_words;
    if (level > 1) seen_words.reserve(static_cast<std::size_t>(r));

    v.blocks = Tri::yes;
    std::int64_t first_bad = -1;
    for (std::int64_t j = 0; j < r; ++j) {
        auto sub = w.subspan(static_cast<std::size_t>(j) * len, len);
        const Tri ok = check_block(sub, level - 1, s, false).result;
        if (ok == Tri::no && first_bad < 0) first_bad = j;
        v.blocks = combine(v.blocks, ok);
        if (std::equal(sub.begin(), sub.end(), pillar.begin())) ++v.pillar_copies;
        if (ok != Tri::yes) continue;
        if (level == 1) {
            seen_symbols.set(sub[0]);
        } else {
            seen_words.insert(as_chars(sub));
        }
    }
    v.distinct_blocks = level == 1 ? static_cast<std::int64_t>(seen_symbols.count())
                                   : static_cast<std::int64_t>(seen_words.size());
    v.pillar_share = 3 * v.pillar_copies >= r;

    if (s.profile == Profile::fast) {
        v.every_word = EveryWord::waived;
    } else if (auto count = s.exact_count(level - 1)) {
        v.every_word = static_cast<std::uint64_t>(v.distinct_blocks) == *count ? EveryWord::satisfied
                                                                                : EveryWord::violated;
    } else {
        v.every_word = EveryWord::undetermined;
    }

    if (v.blocks == Tri::no || !v.pillar_share || v.every_word == EveryWord::violated) {
        v.result = Tri::no;
    } else if (v.blocks == Tri::undetermined || v.every_word == EveryWord::undetermined) {
        v.result = Tri::undetermined;
    } else {
        v.result = Tri::yes;
    }

    if (explain) {
        if (v.blocks == Tri::no) {
            v.reason = "block " + std::to_string(first_bad) + " is not admissible at level " + std::to_string(level - 1);
        } else if (!v.pillar_share) {
            v.reason = "pillar copies " + std::to_string(v.pillar_copies) + " < r/3 = " + std::to_string(r / 3);
        } else if (v.every_word == EveryWord::violated) {
            v.reason = "only " + std::to_string(v.distinct_blocks) + " of " +
                       std::to_string(*s.exact_count(level - 1)) + " level-" + std::to_string(level - 1) +
                       " words occur";
        } else if (v.every_word == EveryWord::undetermined) {
            v.reason = "every-word condition unverifiable: level-" + std::to_string(level - 1) +
                       " count is not exact";
        }
    }
    return v;
}

void fill_fast_pillar(const Schedule& s, int level, std::span<Symbol> out) {
    const std::int64_t r = s.ratio(level);
    const auto len = static_cast<std::size_t>(s.m(level - 1));
    const auto& prev = s.levels[static_cast<std::size_t>(level - 1)].pillar.cells;
    for (std::int64_t j = 0; j < r; ++j) {
        auto dst = out.subspan(static_cast<std::size_t>(j) * len, len);
        if (3 * j < r) {
            std::copy(prev.begin(), prev.end(), dst.begin());
        } else {
            sample_level_word(s, level - 1, mix_key(s.config.seed, static_cast<std::uint64_t>(level), kPillarTag,
                                                    static_cast<std::uint64_t>(j)),
                              dst);
        }
    }
}

}  // namespace

std::string to_string(Profile p) { return p == Profile::faithful ? "faithful" : "fast"; }

Profile parse_profile(const std::string& text) {
    if (text == "faithful") return Profile::faithful;
    if (text == "fast") return Profile::fast;
    throw InvalidParameter("unknown profile \"" + text + "\"");
}

std::string to_string(Tri t) {
    switch (t) {
        case Tri::yes: return "yes";
        case Tri::no: return "no";
        case Tri::undetermined: return "undetermined";
    }
    return "?";
}

std::string to_string(EveryWord e) {
    switch (e) {
        case EveryWord::satisfied: return "satisfied";
        case EveryWord::violated: return "violated";
        case EveryWord::undetermined: return "undetermined";
        case EveryWord::waived: return "waived";
    }
    return "?";
}

double log_bigint(const BigInt& x) {
    if (x <= 0) throw InvalidParameter("log of a nonpositive integer");
    const auto bits = static_cast<long>(boost::multiprecision::msb(x)) + 1;
    if (bits <= 60) return std::log(static_cast<double>(x));
    const long shift = bits - 60;
    const BigInt top = x >> shift;
    return std::log(static_cast<double>(top)) + static_cast<double>(shift) * std::numbers::ln2;
}

LevelCount LevelCount::from_exact(BigInt value) {
    LevelCount c;
    const double ln = log_bigint(value);
    c.log_lower = round_down(ln);
    c.log_upper = round_up(ln);
    c.exact = std::move(value);
    return c;
}

LevelWordSet::LevelWordSet(std::size_t word_length, std::vector<Symbol> flat)
    : length_(word_length), count_(word_length ? flat.size() / word_length : 0), flat_(std::move(flat)) {
    if (length_ == 0 || flat_.size() % length_ != 0) throw InvalidParameter("ragged word table");
}

std::optional<std::size_t> LevelWordSet::find(std::span<const Symbol> w) const {
    if (w.size() != length_) return std::nullopt;
    std::size_t lo = 0;
    std::size_t hi = count_;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        auto cand = word(mid);
        if (std::lexicographical_compare(cand.begin(), cand.end(), w.begin(), w.end())) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo < count_ && std::ranges::equal(word(lo), w)) return lo;
    return std::nullopt;
}

const LevelWordSet* Schedule::level_words(int k) const {
    if (k < 0 || static_cast<std::size_t>(k) >= words.size()) return nullptr;
    return words[static_cast<std::size_t>(k)].get();
}

std::optional<std::uint64_t> Schedule::exact_count(int k) const {
    const auto& card = levels.at(static_cast<std::size_t>(k)).card;
    if (!card.exact || *card.exact > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    return static_cast<std::uint64_t>(*card.exact);
}

Interval Schedule::construction_window() const { return blockshift::construction_window(m(depth()), window_hint); }

Interval construction_window(std::int64_t top_m, Interval hint) {
    const Coord lo = hint.empty() ? 0 : std::min<Coord>(hint.lo, 0);
    const Coord hi = hint.empty() ? 0 : std::max<Coord>(hint.hi, 0);
    return {block_interval(block_index_of(lo, top_m), top_m).lo, block_interval(block_index_of(hi, top_m), top_m).hi};
}

LevelCount level_count(int level, const Schedule& s) {
    if (level == 0) return LevelCount::from_exact(BigInt(s.alphabet.size()));
    const auto& prev = s.levels.at(static_cast<std::size_t>(level - 1)).card;
    const std::int64_t r = s.ratio(level);
    const std::int64_t third = r / 3;
    const bool faithful = s.profile == Profile::faithful;

    if (prev.exact) {
        const BigInt& a = *prev.exact;
        const double bits = static_cast<double>(r) * prev.log_upper / std::numbers::ln2;
        const bool small_a = a <= BigInt(static_cast<std::uint64_t>(kExactTermsLimit));
        const double terms = faithful && small_a ? static_cast<double>(r) * static_cast<double>(a)
                                                 : static_cast<double>(r);
        if (bits <= kExactBitsLimit && terms <= kExactTermsLimit && (small_a || !faithful)) {
            BigInt total = 0;
            BigInt binom = 1;  // C(r, z), starting from z = 0
            for (std::int64_t z = 0; z <= r; ++z) {
                if (z >= third) {
                    const std::int64_t rest = r - z;
                    if (faithful) {
                        total += binom * surjections(rest, static_cast<std::int64_t>(a) - 1);
                    } else {
                        total += binom * boost::multiprecision::pow(a - 1, static_cast<unsigned>(rest));
                    }
                }
                binom = binom * (r - z) / (z + 1);
            }
            return LevelCount::from_exact(std::move(total));
        }
    }

    LevelCount c;
    c.log_upper = round_up(static_cast<double>(r) * std::numbers::ln2 +
                           (2.0 * static_cast<double>(r) / 3.0) * prev.log_upper);
    const double log_c = log_binomial(static_cast<double>(r), static_cast<double>(third));
    if (faithful && prev.exact) {
        // one composition: the r/3 pillar slots chosen, then the other a-1 words in
        // fixed order, then anything non-pillar
        const double a_minus_one = static_cast<double>(*prev.exact - 1);
        const double free_slots = static_cast<double>(r - third) - a_minus_one;
        c.log_lower = round_down(log_c + free_slots * std::log(a_minus_one));
    } else {
        c.log_lower = round_down(log_c + (2.0 * static_cast<double>(r) / 3.0) * log_minus_one_lower(prev.log_lower));
    }
    c.log_lower = std::max(0.0, c.log_lower);
    return c;
}

LevelWordEnumerator::LevelWordEnumerator(const Schedule& s, int level, std::uint64_t total) : total_(total) {
    if (level == 0) {
        alphabet_size_ = s.alphabet.size();
        return;
    }
    sub_ = s.level_words(level - 1);
    if (!sub_) throw InfeasibleDepth("level-" + std::to_string(level - 1) + " words are not enumerated");
    r_ = static_cast<std::size_t>(s.ratio(level));
    pillar_share_ = r_ / 3;
    auto p = sub_->find(s.levels[static_cast<std::size_t>(level - 1)].pillar.view());
    if (!p) throw ConstructionInvariant("pillar missing from its own level", level - 1);
    pillar_ = *p;
    require_every_word_ = s.profile == Profile::faithful;
    choice_.assign(r_, 0);
    cover_.assign(sub_->size(), 0);
    uncovered_ = sub_->size() - 1;
}

bool LevelWordEnumerator::place(std::size_t pos, std::size_t c) {
    const std::size_t copies = pillar_copies_ + (c == pillar_ ? 1 : 0);
    const std::size_t uncovered = uncovered_ - (c != pillar_ && cover_[c] == 0 ? 1 : 0);
    const std::size_t remaining = r_ - pos - 1;
    const std::size_t need = (copies < pillar_share_ ? pillar_share_ - copies : 0) +
                             (require_every_word_ ? uncovered : 0);
    if (need > remaining) return false;
    choice_[pos] = c;
    pillar_copies_ = copies;
    uncovered_ = uncovered;
    ++cover_[c];
    return true;
}

void LevelWordEnumerator::unplace(std::size_t pos) {
    const std::size_t c = choice_[pos];
    --cover_[c];
    if (c == pillar_) {
        --pillar_copies_;
    } else if (cover_[c] == 0) {
        ++uncovered_;
    }
}

bool LevelWordEnumerator::fill_from(std::size_t pos) {
    for (std::size_t j = pos; j < r_; ++j) {
        std::size_t c = 0;
        while (c < sub_->size() && !place(j, c)) ++c;
        if (c == sub_->size()) return false;
    }
    return true;
}

bool LevelWordEnumerator::next(Word& out) {
    if (done_) return false;
    if (!sub_) {
        // level 0: the symbols themselves
        if (!started_) choice_.assign(1, 0);
        else ++choice_[0];
        started_ = true;
        if (choice_[0] >= alphabet_size_) {
            done_ = true;
            return false;
        }
        out.cells.assign(1, static_cast<Symbol>(choice_[0]));
        return true;
    }
    bool ok = false;
    if (!started_) {
        started_ = true;
        ok = fill_from(0);
    } else {
        for (std::size_t j = r_; j-- > 0 && !ok;) {
            const std::size_t prev = choice_[j];
            unplace(j);
            for (std::size_t c = prev + 1; c < sub_->size(); ++c) {
                if (place(j, c)) {
                    if (fill_from(j + 1)) {
                        ok = true;
                    }
                    break;
                }
            }
        }
    }
    if (!ok) {
        done_ = true;
        return false;
    }
    const std::size_t len = sub_->word_length();
    out.cells.resize(r_ * len);
    for (std::size_t j = 0; j < r_; ++j) {
        auto w = sub_->word(choice_[j]);
        std::copy(w.begin(), w.end(), out.cells.begin() + static_cast<std::ptrdiff_t>(j * len));
    }
    return true;
}

LevelWordEnumerator enumerate_level_words(int level, const Schedule& s, std::uint64_t cap) {
    if (level < 0 || level > s.depth()) throw InvalidParameter("level " + std::to_string(level) + " not built");
    const auto& card = s.levels[static_cast<std::size_t>(level)].card;
    if (!card.exact) {
        throw InfeasibleDepth("|A_" + std::to_string(level) + "| is only known as bounds (ln in [" +
                              std::to_string(card.log_lower) + ", " + std::to_string(card.log_upper) + "])");
    }
    if (*card.exact > cap) {
        throw InfeasibleDepth("|A_" + std::to_string(level) + "| = " + card.exact->str() + " exceeds cap " +
                              std::to_string(cap));
    }
    return LevelWordEnumerator(s, level, static_cast<std::uint64_t>(*card.exact));
}

Word canonical_pillar(int level, const Schedule& s) {
    if (level == 0) return Word({Alphabet::zero()});
    const LevelWordSet* sub = s.level_words(level - 1);
    if (!sub) throw InfeasibleDepth("canonical pillar at level " + std::to_string(level) + " needs A_" +
                                    std::to_string(level - 1) + " enumerated");
    const auto& prev = s.levels[static_cast<std::size_t>(level - 1)].pillar;
    const std::int64_t r = s.ratio(level);
    const auto a = static_cast<std::int64_t>(sub->size());
    if (r - a + 1 < (r + 2) / 3) {
        throw ConstructionInvariant("ratio " + std::to_string(r) + " too small for " + std::to_string(a) + " words",
                                    level);
    }
    std::vector<Symbol> cells;
    cells.reserve(static_cast<std::size_t>(s.m(level)));
    for (std::int64_t j = 0; j < r - a + 1; ++j) cells.insert(cells.end(), prev.cells.begin(), prev.cells.end());
    for (std::size_t i = 0; i < sub->size(); ++i) {
        auto w = sub->word(i);
        if (std::ranges::equal(w, prev.cells)) continue;
        cells.insert(cells.end(), w.begin(), w.end());
    }
    return Word(std::move(cells));
}

void sample_level_word(const Schedule& s, int k, std::uint64_t key, std::span<Symbol> out) {
    if (k == 0) {
        out[0] = static_cast<Symbol>(key % s.alphabet.size());
        return;
    }
    const std::int64_t r = s.ratio(k);
    const auto len = static_cast<std::size_t>(s.m(k - 1));
    const auto& prev = s.levels[static_cast<std::size_t>(k - 1)].pillar.cells;
    for (std::int64_t j = 0; j < r; ++j) {
        auto dst = out.subspan(static_cast<std::size_t>(j) * len, len);
        if (3 * j < r) {
            std::copy(prev.begin(), prev.end(), dst.begin());
        } else {
            sample_level_word(s, k - 1, mix_key(key, static_cast<std::uint64_t>(j), 0, 0), dst);
        }
    }
}

AdmissibilityVerdict is_admissible_block(std::span<const Symbol> w, int level, const Schedule& s) {
    if (level < 0 || level > s.depth()) throw InvalidParameter("level " + std::to_string(level) + " not built");
    check_same_length(w, s.m(level), level);
    return check_block(w, level, s, true);
}

std::string word_digest(std::span<const Symbol> w) {
    Fnv1a h;
    h.update(w);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.digest()));
    return buf;
}

Schedule build_schedule(const Alphabet& alphabet, const SparseSetSpec& sparse, int depth, Interval window_hint,
                        Profile profile, const ScheduleConfig& config) {
    if (depth < 1) throw InvalidParameter("depth must be >= 1");
    Schedule s{alphabet, sparse, profile, {}, {}, window_hint, {}, config};

    {
        LevelParams base;
        base.k = 0;
        base.m = 1;
        base.pillar = Word({Alphabet::zero()});
        base.card = LevelCount::from_exact(BigInt(alphabet.size()));
        s.levels.push_back(std::move(base));
        std::vector<Symbol> flat(alphabet.size());
        for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = static_cast<Symbol>(i);
        s.words.push_back(std::make_shared<const LevelWordSet>(1, std::move(flat)));
    }

    const Coord hint_hi = window_hint.empty() ? 0 : window_hint.hi;
    for (int k = 0; k < depth; ++k) {
        const LevelParams& cur = s.levels.back();
        const std::int64_t step = 3 * cur.m;

        // Lower bound the candidate must exceed.
        const double growth = 12.0 * std::numbers::ln2 * std::pow(4.0 / 3.0, k + 1);
        BigInt bound = static_cast<std::int64_t>(std::floor(growth));
        if (profile == Profile::faithful) {
            if (!cur.card.exact) {
                throw InfeasibleDepth("faithful level " + std::to_string(k + 1) + " needs |A_" + std::to_string(k) +
                                      "| exactly; only ln-bounds [" + std::to_string(cur.card.log_lower) + ", " +
                                      std::to_string(cur.card.log_upper) + "] are known");
            }
            if (!s.level_words(k)) {
                throw InfeasibleDepth("faithful level " + std::to_string(k + 1) + " needs A_" + std::to_string(k) +
                                      " enumerated, but |A_" + std::to_string(k) + "| = " + cur.card.exact->str() +
                                      " exceeds the enumeration cap " + std::to_string(config.enumeration_cap));
            }
            bound = std::max(bound, BigInt(step) * *cur.card.exact);
        }
        if (bound >= config.max_block_length) {
            throw InfeasibleDepth("level " + std::to_string(k + 1) + " block length would exceed " +
                                  std::to_string(config.max_block_length));
        }
        auto q = static_cast<std::int64_t>(bound / step) + 1;
        if (q % 2 == 0) ++q;

        std::optional<WindowCount> first_violation;
        int tested = 0;
        std::int64_t chosen = 0;
        while (true) {
            if (q > config.max_block_length / step) break;
            const std::int64_t length = q * step;
            const Interval range{1, std::max(hint_hi, length)};
            auto hit = first_window_at_least(sparse, length, range, q);
            if (!hit) {
                chosen = length;
                break;
            }
            if (!first_violation) first_violation = hit;
            if (++tested >= config.max_candidates) break;
            // Longer windows contain the witness, so every q' <= hit->count fails as well.
            std::int64_t skip = hit->count + 1;
            if (skip % 2 == 0) ++skip;
            q = std::max(q + 2, skip);
        }
        if (chosen == 0) {
            const WindowCount w = first_violation.value_or(WindowCount{});
            throw DensityViolation("no block length for level " + std::to_string(k + 1) +
                                       " satisfies |S ∩ I| < |I|/(3·" + std::to_string(cur.m) +
                                       ") within the search cap; witness " + to_string(w.witness) + " holds " +
                                       std::to_string(w.count) + " elements",
                                   k, w.witness, w.count);
        }

        LevelParams next;
        next.k = k + 1;
        next.m = chosen;
        s.levels.push_back(std::move(next));
        s.levels.back().card = level_count(k + 1, s);
        if (profile == Profile::faithful) {
            s.levels.back().pillar = canonical_pillar(k + 1, s);
        } else {
            s.levels.back().pillar.cells.assign(static_cast<std::size_t>(chosen), kStar);
            fill_fast_pillar(s, k + 1, s.levels.back().pillar.cells);
        }

        std::shared_ptr<const LevelWordSet> table;
        if (profile == Profile::faithful && s.levels.back().card.exact &&
            *s.levels.back().card.exact <= config.enumeration_cap) {
            auto gen = enumerate_level_words(k + 1, s, config.enumeration_cap);
            std::vector<Symbol> flat;
            flat.reserve(static_cast<std::size_t>(gen.total()) * static_cast<std::size_t>(chosen));
            Word w;
            while (gen.next(w)) flat.insert(flat.end(), w.cells.begin(), w.cells.end());
            table = std::make_shared<const LevelWordSet>(static_cast<std::size_t>(chosen), std::move(flat));
            if (table->size() != gen.total()) {
                throw ConstructionInvariant("enumeration produced " + std::to_string(table->size()) +
                                                " words, count says " + std::to_string(gen.total()),
                                            k + 1);
            }
        }
        s.words.push_back(std::move(table));
    }

    // Every level must be sparse enough over everything realize() can touch.
    const Interval window = s.construction_window();
    s.verified_range = {1, std::max(window.hi, s.m(depth))};
    for (int k = 1; k <= depth; ++k) {
        const std::int64_t limit = s.ratio(k) / 3;
        if (auto hit = first_window_at_least(sparse, s.m(k), s.verified_range, limit)) {
            throw DensityViolation("level " + std::to_string(k) + " block length " + std::to_string(s.m(k)) +
                                       " fails sparsity on " + to_string(hit->witness) + " (" +
                                       std::to_string(hit->count) + " elements)",
                                   k - 1, hit->witness, hit->count);
        }
    }
    return s;
}

}  // namespace blockshift
