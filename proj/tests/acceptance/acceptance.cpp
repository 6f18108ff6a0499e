// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "blockshift/analysis.hpp"
#include "blockshift/arithmetic.hpp"
#include "blockshift/cli.hpp"
#include "blockshift/errors.hpp"
#include "blockshift/hashing.hpp"
#include "blockshift/window_file.hpp"
#include "oracles.hpp"

using namespace blockshift;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

long peak_rss_mb() {
    rusage u{};
    getrusage(RUSAGE_SELF, &u);
    return u.ru_maxrss / 1024;
}

struct Outcome {
    bool passed = true;
    std::ostringstream notes;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            notes << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    try {
        body(o);
    } catch (const std::exception& e) {
        o.passed = false;
        o.notes << " [exception: " << e.what() << "]";
    }
    if (!o.passed) ++failures;
    std::cout << (o.passed ? "PASS" : "FAIL") << "  " << id << ". " << title << ":" << o.notes.str() << std::endl;
}

std::string run_capture(std::vector<std::string> args, int& code) {
    args.insert(args.begin(), "blockshift");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out;
    std::ostringstream err;
    code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return out.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Pipeline {
    Schedule schedule;
    TargetSequence u;
    PartialWindow window;
    double build_seconds;
    double realize_seconds;
};

}  // namespace

int main() {
    const Alphabet binary("01");
    const SparseSetSpec squares = SparseSetSpec::squares();
    std::optional<Pipeline> p2;

    criterion(1, "schedule exactness (binary, squares)", [&](Outcome& o) {
        auto t = Clock::now();
        const Schedule s1 = build_schedule(binary, squares, 1, {}, Profile::faithful);
        const double level1 = seconds_since(t);
        const auto brute = oracle::binary_level1_words();
        o.expect(s1.m(1) == 15, "m_1 = 15");
        o.expect(s1.levels[1].card.exact && *s1.levels[1].card.exact == 30826, "|A_1| = 30826");
        o.expect(brute.size() == 30826, "brute force over 2^15 gives 30826");
        bool same = s1.level_words(1)->size() == brute.size();
        for (std::size_t i = 0; same && i < brute.size(); ++i) same = render(binary, s1.level_words(1)->word(i)) == brute[i];
        o.expect(same, "enumeration equals brute-force set");
        o.expect(level1 < 1.0, "level 1 under 1 s");

        t = Clock::now();
        const Schedule s2 = build_schedule(binary, squares, 2, {}, Profile::faithful);
        const double level2 = seconds_since(t);
        o.expect(s2.m(2) == 1387215 && s2.m(2) == 45 * 30827, "m_2 = 1387215 = 45*30827");
        // linear candidate scan above 3*15*30826
        std::int64_t first = 0;
        for (std::int64_t q = 1; first == 0; q += 2) {
            const std::int64_t len = 45 * q;
            if (len <= 1387170) continue;
            if (oracle::max_window(oracle::squares_upto(len), len, 1, len) < q) first = len;
        }
        o.expect(first == s2.m(2), "first admissible candidate above 1387170");
        o.expect(level2 < 30.0, "level-2 scan under 30 s");
        o.notes << " m_1=" << s1.m(1) << " |A_1|=" << *s1.levels[1].card.exact << " (brute " << brute.size()
                << ") m_2=" << s2.m(2) << " oracle=" << first << " t1=" << level1 << "s t2=" << level2 << "s";

        t = Clock::now();
        auto u = mu_indicator_target(std::make_shared<const MobiusTable>(833), binary);
        PartialWindow x = realize(u, s2, 2);
        p2 = Pipeline{s2, std::move(u), std::move(x), level2, seconds_since(t)};
    });

    criterion(2, "realization exactness, depth 2", [&](Outcome& o) {
        if (!p2) throw std::runtime_error("no depth-2 pipeline");
        const auto report = verify_realization(p2->window, p2->u, squares);
        o.expect(report.passed && report.checked == 832, "832 constraints hold");
        for (std::int64_t n = 1; n <= 832; ++n) {
            if (p2->window.at(n * n) != (oracle::mobius(n) == 1 ? 1 : 0)) {
                o.expect(false, "x(n^2) = u(n) at n = " + std::to_string(n));
                break;
            }
        }
        o.expect(p2->window.range() == Interval{-693607, 693607}, "window [-693607, 693607]");
        o.expect(833 * 833 > 693607 && 832 * 832 <= 693607, "exactly 832 squares inside");
        const Schedule s1 = build_schedule(binary, squares, 1, {}, Profile::faithful);
        const auto x1 = realize(p2->u, s1, 1);
        o.expect(std::ranges::equal(x1.cells(), p2->window.view({-7, 7})), "central 15 cells agree across depths");
        const double total = p2->build_seconds + p2->realize_seconds;
        const long rss = peak_rss_mb();
        o.expect(total < 60.0, "under 60 s");
        o.expect(rss < 200, "under 200 MB");
        o.notes << " checked=" << report.checked << " depth1=" << render(binary, x1.cells()) << " time=" << total
                << "s peak_rss=" << rss << "MB";
    });

    criterion(3, "admissibility of the depth-2 central block", [&](Outcome& o) {
        if (!p2) throw std::runtime_error("no depth-2 pipeline");
        const auto m = aligned_membership(p2->window, p2->schedule, 1);
        const auto v = is_admissible_block(p2->window.view(block_interval(0, p2->schedule.m(2))), 2, p2->schedule);
        o.expect(m.blocks == 92481, "92481 level-1 blocks");
        o.expect(m.members == 92481, "each in A_1");
        o.expect(v.pillar_copies >= 30827, ">= 30827 copies of w_1");
        o.expect(m.distinct == 30826 && v.distinct_blocks == 30826, "all 30826 words occur");
        o.expect(v.result == Tri::yes, "block admissible");
        o.notes << " blocks=" << m.blocks << " members=" << m.members << " w_1 copies=" << v.pillar_copies
                << " distinct=" << m.distinct << " verdict=" << to_string(v.result);
    });

    criterion(4, "entropy chain", [&](Outcome& o) {
        if (!p2) throw std::runtime_error("no depth-2 pipeline");
        const Schedule& s = p2->schedule;
        const double b1 = std::log(30826.0) / 15;
        const auto decay = decay_check(s);
        const auto rec = recurrence_check(s);
        const auto series = entropy_bound_series(s, 20);
        o.expect(b1 >= 0.6890 && b1 <= 0.6892 && b1 <= 0.75, "b_1 in [0.6890, 0.6892] <= 0.75");
        o.expect(std::abs(decay[0].b - b1) < 1e-9, "schedule b_1 matches ln(30826)/15");
        const double rhs = std::log(2.0) / 15 + 2.0 / 3 * b1;
        o.expect(rhs >= 0.5055 && rhs <= 0.5057 && rhs <= 0.5625, "rhs in [0.5055, 0.5057] <= 0.5625");
        o.expect(rec[1].holds && rec[1].lhs <= rhs * (1 + kRecurrenceSlack), "ln|A_2|-upper/m_2 <= rhs");
        o.expect(series[20].bound < 0.01, "bound_20 < 0.01");
        bool decreasing = true;
        for (int k = 2; k < 20; ++k) decreasing = decreasing && series[k + 1].bound < series[k].bound;
        o.expect(decreasing, "strictly decreasing for k >= 2");
        o.notes << " b_1=" << b1 << " lhs_2=" << rec[1].lhs << " rhs=" << rhs << " bound_20=" << series[20].bound
                << " (ln|A| constant at k=1: " << decay[0].original << ", "
                << (decay[0].holds_original ? "holds" : "does not hold") << "; reported only)";
    });

    criterion(5, "minimality witnesses and mutation detection", [&](Outcome& o) {
        if (!p2) throw std::runtime_error("no depth-2 pipeline");
        const Schedule& s = p2->schedule;
        const auto report = minimality_witnesses(p2->window, s, 2);
        std::int64_t max_gap = 0;
        for (const auto& c : report.checks) {
            o.expect(c.status == "pass", c.name + " k=" + std::to_string(c.k) + ": " + c.detail);
            if (c.name == "gap-bound" && c.k == 1) max_gap = c.observed;
        }
        o.expect(max_gap <= 2 * s.m(2), "w_1 gap <= 2 m_2");

        const WindowFile file = make_window_file(s, 2, "mu-indicator", {}, p2->window);
        const std::string text = serialize_window(file);
        const std::size_t payload_at = text.find("payload\n") + 8;
        const Interval top = block_interval(0, s.m(2));
        int caught = 0;
        int by_checksum = 0;
        int by_structure = 0;
        for (std::uint64_t trial = 0; trial < 100; ++trial) {
            const auto cell = static_cast<std::int64_t>(mix_key(2024, 5, trial, 0) % p2->window.size());
            const Coord c = p2->window.offset() + cell;
            const Symbol flipped = static_cast<Symbol>(1 - p2->window.at(c));

            std::string mutated = text;
            const std::size_t at = payload_at + static_cast<std::size_t>(cell) + static_cast<std::size_t>(cell) / kPayloadLineCells;
            mutated[at] = binary.symbol(flipped);
            bool checksum = false;
            try {
                parse_window(mutated);
            } catch (const ChecksumError&) {
                checksum = true;
            }

            PartialWindow x = p2->window;
            x.set(c, flipped);
            const bool realization = !verify_realization(x, p2->u, squares).passed;
            const bool admissibility = is_admissible_block(x.view(top), 2, s).result != Tri::yes;
            by_checksum += checksum;
            by_structure += realization || admissibility;
            caught += checksum || realization || admissibility;
        }
        o.expect(caught == 100, "every mutation detected");
        o.notes << " witnesses=" << report.checks.size() << " max w_1 gap=" << max_gap << " mutations caught "
                << caught << "/100 (checksum " << by_checksum << ", realization/admissibility " << by_structure
                << ")";
    });

    criterion(6, "correlation demo", [&](Outcome& o) {
        const auto demo = sarnak_demo(Profile::faithful, 2, 832);
        std::int64_t ones = 0;
        for (std::int64_t n = 1; n <= 832; ++n) ones += oracle::mobius(n) == 1;
        const auto& last = demo.correlation.rows.back();
        o.expect(demo.correlation.exact_identity.value_or(false), "exact identity flag");
        o.expect(last.n == 832 && last.numerator == ones, "sum mu(n) x(n^2) = #{mu = 1}");
        const double q = static_cast<double>(ones) / 832;
        o.expect(q >= 0.28 && q <= 0.33, "quotient in [0.28, 0.33]");

        const auto t = Clock::now();
        const auto fast = sarnak_demo(Profile::fast, 3, 5000);
        const auto& end = fast.correlation.rows.back();
        const double target = 6.0 / (std::numbers::pi * std::numbers::pi);
        o.expect(fast.realization.passed, "fast realization");
        o.expect(fast.correlation.exact_identity.value_or(false) && end.numerator == fast.squarefree,
                 "fast identity A(N) = Q(N)/N");
        o.expect(std::abs(end.average - target) <= 0.02, "within 0.02 of 6/pi^2");
        o.notes << " A(832)=" << last.average << " (" << last.numerator << "/832, oracle " << ones
                << ") fast A(5000)=" << end.average << " |diff|=" << std::abs(end.average - target)
                << " fast time=" << seconds_since(t) << "s";
    });

    criterion(7, "converse path", [&](Outcome& o) {
        std::optional<DensityViolation> violation;
        try {
            build_schedule(binary, SparseSetSpec::evens(), 1, {}, Profile::faithful);
        } catch (const DensityViolation& e) {
            violation = e;
        }
        o.expect(violation.has_value(), "evens raises DensityViolation");
        const double bound = positive_density_bound({1, 2}, 2);
        o.expect(std::abs(bound - 0.17329) <= 1e-5, "alpha ln a / 2 = 0.17329");
        if (violation) {
            const Interval w = violation->witness();
            const auto in = static_cast<std::int64_t>(elements_in(SparseSetSpec::evens(), w).size());
            const BigInt forced = realization_forced_count(w.length(), in, 2);
            o.expect(in == violation->count(), "witness count recomputed");
            o.expect(forced >= boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(in)), "forced >= 2^|S∩I|");
            o.notes << " witness=" << to_string(w) << " |S∩I|=" << in << " forced=" << forced.str()
                    << " ln(forced)/L=" << std::log(static_cast<double>(forced)) / static_cast<double>(w.length());
        }
        o.notes << " bound=" << bound;
    });

    criterion(8, "sieve calibration", [&](Outcome& o) {
        const MobiusTable t(1000000);
        bool agree = true;
        for (std::int64_t n = 1; n <= 10000; ++n) agree = agree && t.mu(n) == oracle::mobius(n);
        o.expect(agree, "mu agrees with trial division for n <= 10^4");
        const double q = static_cast<double>(t.squarefree_count()) / 1e6;
        o.expect(std::abs(q - 0.607926) <= 1e-6, "Q(10^6)/10^6 = 0.607926");
        std::int64_t m100 = 0;
        for (std::int64_t n = 1; n <= 100; ++n) m100 += oracle::mobius(n);
        const MobiusTable hundred(100);
        o.expect(hundred.mertens() == m100, "M(100) matches factorization");
        o.notes << " Q(10^6)/10^6=" << q << " M(100)=" << hundred.mertens() << " (oracle " << m100 << ")";
    });

    criterion(9, "determinism and persistence", [&](Outcome& o) {
        int code = 0;
        run_capture({"realize", "--depth", "2", "--u", "mu-indicator", "--out", "acceptance_a.bsw"}, code);
        o.expect(code == 0, "first realize");
        run_capture({"realize", "--depth", "2", "--u", "mu-indicator", "--out", "acceptance_b.bsw"}, code);
        o.expect(code == 0, "second realize");
        const std::string a = slurp("acceptance_a.bsw");
        const std::string b = slurp("acceptance_b.bsw");
        o.expect(!a.empty() && a == b, "window files byte-identical");

        const std::string r1 = run_capture({"demo-sarnak", "--profile", "faithful", "--depth", "2", "--N", "832"}, code);
        const std::string r2 = run_capture({"demo-sarnak", "--profile", "faithful", "--depth", "2", "--N", "832"}, code);
        o.expect(code == 0 && r1 == r2, "demo reports byte-identical");
        const std::string c1 = run_capture({"complexity", "acceptance_a.bsw", "--nmax", "24"}, code);
        const std::string c2 = run_capture({"complexity", "acceptance_b.bsw", "--nmax", "24"}, code);
        o.expect(code == 0 && c1 == c2, "complexity reports byte-identical");

        save_window("acceptance_c.bsw", load_window("acceptance_a.bsw"));
        o.expect(slurp("acceptance_c.bsw") == a, "save(load(f)) byte-exact");
        const std::string v = run_capture({"verify", "acceptance_a.bsw"}, code);
        o.expect(code == 0, "verify passes");

        const auto fast1 = run_capture({"realize", "--profile", "fast", "--alphabet", "0+-", "--depth", "2", "--u",
                                        "mu-sign", "--seed", "7", "--out", "acceptance_f1.bsw"},
                                       code);
        run_capture({"realize", "--profile", "fast", "--alphabet", "0+-", "--depth", "2", "--u", "mu-sign", "--seed",
                     "7", "--out", "acceptance_f2.bsw"},
                    code);
        o.expect(slurp("acceptance_f1.bsw") == slurp("acceptance_f2.bsw"), "seeded fast windows byte-identical");
        o.notes << " window bytes=" << a.size() << " demo bytes=" << r1.size()
                << " checksum=" << payload_checksum(binary, load_window("acceptance_a.bsw").window);
    });

    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures;
}
