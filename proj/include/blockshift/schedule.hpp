#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "blockshift/core_words.hpp"
#include "blockshift/sparse_sets.hpp"

namespace blockshift {

using BigInt = boost::multiprecision::cpp_int;

enum class Profile { faithful, fast };

std::string to_string(Profile p);
Profile parse_profile(const std::string& text);

/// |A_k| either exactly or as natural-log bounds. Exact counts also carry their log
/// in both fields.
struct LevelCount {
    std::optional<BigInt> exact;
    double log_lower = 0;
    double log_upper = 0;

    bool is_exact() const { return exact.has_value(); }
    static LevelCount from_exact(BigInt value);
};

struct LevelParams {
    int k = 0;
    std::int64_t m = 1;
    Word pillar;
    LevelCount card;
};

/// Sorted flat table of equal-length words.
class LevelWordSet {
public:
    LevelWordSet(std::size_t word_length, std::vector<Symbol> flat);

    std::size_t size() const { return count_; }
    std::size_t word_length() const { return length_; }
    std::span<const Symbol> word(std::size_t i) const {
        return std::span<const Symbol>(flat_).subspan(i * length_, length_);
    }
    std::optional<std::size_t> find(std::span<const Symbol> w) const;

private:
    std::size_t length_;
    std::size_t count_;
    std::vector<Symbol> flat_;
};

struct ScheduleConfig {
    // Largest block length the candidate search may return.
    std::int64_t max_block_length = std::int64_t{1} << 40;
    // Candidates actually tested per level (provably failing ones are skipped, not counted).
    int max_candidates = 64;
    // Largest |A_k| that is materialized as a word list.
    std::uint64_t enumeration_cap = std::uint64_t{1} << 20;
    // Seed for the fast profile's sampled words.
    std::uint64_t seed = 0;
};

struct Schedule {
    Alphabet alphabet;
    SparseSetSpec sparse;
    Profile profile = Profile::faithful;
    std::vector<LevelParams> levels;
    // Words of A_k where enumeration was feasible, null otherwise.
    std::vector<std::shared_ptr<const LevelWordSet>> words;
    Interval window_hint;
    Interval verified_range;
    ScheduleConfig config;

    int depth() const { return static_cast<int>(levels.size()) - 1; }
    std::int64_t m(int k) const { return levels.at(static_cast<std::size_t>(k)).m; }
    // m_k / m_{k-1}
    std::int64_t ratio(int k) const { return m(k) / m(k - 1); }
    const LevelWordSet* level_words(int k) const;
    // Exact |A_k| as a machine integer, if known and representable.
    std::optional<std::uint64_t> exact_count(int k) const;
    // Window that realize() materializes: the hull of all top-level blocks meeting
    // window_hint or coordinate 0.
    Interval construction_window() const;
};

/// Levels 0..depth. An empty window_hint means the central top-level block only.
Schedule build_schedule(const Alphabet& alphabet, const SparseSetSpec& sparse, int depth, Interval window_hint,
                        Profile profile, const ScheduleConfig& config = {});

Interval construction_window(std::int64_t top_m, Interval hint);

enum class Tri { yes, no, undetermined };
std::string to_string(Tri t);

enum class EveryWord { satisfied, violated, undetermined, waived };
std::string to_string(EveryWord e);

struct AdmissibilityVerdict {
    Tri result = Tri::no;
    // every level-k block admissible at level k (recursively)
    Tri blocks = Tri::no;
    bool pillar_share = false;
    EveryWord every_word = EveryWord::undetermined;
    std::int64_t pillar_copies = 0;
    std::int64_t distinct_blocks = 0;
    std::string reason;
};

/// Is `w` a member of A_level? In the fast profile only block structure and the
/// pillar share are checked.
AdmissibilityVerdict is_admissible_block(std::span<const Symbol> w, int level, const Schedule& schedule);

/// Lexicographic generator over A_level (single consumer).
class LevelWordEnumerator {
public:
    bool next(Word& out);
    std::uint64_t total() const { return total_; }

private:
    friend LevelWordEnumerator enumerate_level_words(int level, const Schedule& schedule, std::uint64_t cap);
    LevelWordEnumerator(const Schedule& schedule, int level, std::uint64_t total);

    bool place(std::size_t pos, std::size_t choice);
    void unplace(std::size_t pos);
    bool fill_from(std::size_t pos);

    const LevelWordSet* sub_ = nullptr;
    std::size_t alphabet_size_ = 0;
    std::size_t r_ = 0;
    std::size_t pillar_share_ = 0;
    std::size_t pillar_ = 0;
    bool require_every_word_ = true;
    std::uint64_t total_ = 0;
    bool started_ = false;
    bool done_ = false;

    std::vector<std::size_t> choice_;
    std::vector<std::size_t> cover_;
    std::size_t pillar_copies_ = 0;
    std::size_t uncovered_ = 0;
};

/// Throws InfeasibleDepth when |A_level| is not exactly known or exceeds `cap`.
LevelWordEnumerator enumerate_level_words(int level, const Schedule& schedule, std::uint64_t cap);

/// Exact |A_level| where cheap, log bounds otherwise, from level-(level-1) data.
LevelCount level_count(int level, const Schedule& schedule);

/// The faithful pillar w_level: (r - a + 1) copies of w_{level-1} followed by the
/// other level-(level-1) words in enumeration order.
Word canonical_pillar(int level, const Schedule& schedule);

/// Writes a pseudo-random level-k word (fast profile) determined by `key` into `out`.
void sample_level_word(const Schedule& schedule, int k, std::uint64_t key, std::span<Symbol> out);

/// ln of a positive big integer.
double log_bigint(const BigInt& x);

/// Hex FNV-1a digest of a word, used in schedule tables.
std::string word_digest(std::span<const Symbol> w);

}  // namespace blockshift
