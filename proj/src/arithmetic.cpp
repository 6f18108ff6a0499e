#include "blockshift/arithmetic.hpp"

#include <fstream>
#include <sstream>

#include "blockshift/errors.hpp"

namespace blockshift {

MobiusTable::MobiusTable(std::int64_t n) {
    if (n < 1) throw InvalidParameter("Mobius sieve bound must be >= 1");
    values_.assign(static_cast<std::size_t>(n + 1), 0);
    std::vector<std::int64_t> primes;
    std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
    values_[1] = 1;
    for (std::int64_t i = 2; i <= n; ++i) {
        if (!composite[static_cast<std::size_t>(i)]) {
            primes.push_back(i);
            values_[static_cast<std::size_t>(i)] = -1;
        }
        for (std::int64_t p : primes) {
            const std::int64_t ip = i * p;
            if (ip > n) break;
            composite[static_cast<std::size_t>(ip)] = true;
            if (i % p == 0) {
                values_[static_cast<std::size_t>(ip)] = 0;
                break;
            }
            values_[static_cast<std::size_t>(ip)] = static_cast<std::int8_t>(-values_[static_cast<std::size_t>(i)]);
        }
    }
    for (std::int64_t i = 1; i <= n; ++i) {
        mertens_ += values_[static_cast<std::size_t>(i)];
        if (values_[static_cast<std::size_t>(i)] != 0) ++squarefree_;
    }
}

int MobiusTable::mu(std::int64_t n) const {
    if (n < 1 || n > limit()) throw RangeError("mu(" + std::to_string(n) + ") outside sieve", n);
    return values_[static_cast<std::size_t>(n)];
}

std::int64_t MobiusTable::squarefree_count(std::int64_t n) const {
    if (n > limit()) throw RangeError("squarefree count past sieve bound", n);
    std::int64_t q = 0;
    for (std::int64_t i = 1; i <= n; ++i) q += values_[static_cast<std::size_t>(i)] != 0;
    return q;
}

MobiusTable mobius_sieve(std::int64_t n) { return MobiusTable(n); }

std::int64_t WeightTable::at(std::int64_t n) const {
    if (n < 1 || n > limit()) throw RangeError("weight " + description + " undefined at n = " + std::to_string(n), n);
    return values[static_cast<std::size_t>(n - 1)];
}

WeightTable WeightTable::mobius(const MobiusTable& table) {
    WeightTable w{"mobius", {}};
    w.values.reserve(static_cast<std::size_t>(table.limit()));
    for (std::int64_t n = 1; n <= table.limit(); ++n) w.values.push_back(table.mu(n));
    return w;
}

WeightTable WeightTable::zero(std::int64_t n) { return {"zero", std::vector<std::int64_t>(static_cast<std::size_t>(n), 0)}; }

WeightTable WeightTable::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open weight table " + path);
    WeightTable w{"csv:" + path, {}};
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string n_text;
        std::string rho_text;
        std::getline(fields, n_text, ',');
        std::getline(fields, rho_text, ',');
        try {
            const long long n = std::stoll(n_text);
            if (n != static_cast<long long>(w.values.size()) + 1) {
                throw InvalidParameter("weight table " + path + " skips from n = " + std::to_string(w.values.size()) +
                                       " to " + std::to_string(n));
            }
            w.values.push_back(std::stoll(rho_text));
        } catch (const std::invalid_argument&) {
            if (!first) throw InvalidParameter("bad weight row: " + line);
        }
        first = false;
    }
    return w;
}

std::vector<std::int64_t> default_symbol_values(const Alphabet& alphabet) {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
        switch (alphabet.symbol(static_cast<Symbol>(i))) {
            case '0': out.push_back(0); break;
            case '1':
            case '+': out.push_back(1); break;
            case '-': out.push_back(-1); break;
            default: out.push_back(static_cast<std::int64_t>(i));
        }
    }
    return out;
}

TargetSequence mu_indicator_target(std::shared_ptr<const MobiusTable> table, const Alphabet& alphabet) {
    const Symbol one = alphabet.index_of('1');
    if (one == kStar) throw InvalidParameter("mu-indicator needs a '1' symbol in \"" + alphabet.symbols() + "\"");
    return TargetSequence::rule(
        [table, one](std::int64_t n) { return table->mu(n) == 1 ? one : Alphabet::zero(); }, table->limit(),
        "mu-indicator");
}

TargetSequence mu_sign_target(std::shared_ptr<const MobiusTable> table, const Alphabet& alphabet) {
    Symbol plus = alphabet.index_of('+');
    if (plus == kStar) plus = alphabet.index_of('1');
    const Symbol minus = alphabet.index_of('-');
    if (plus == kStar || minus == kStar) {
        throw InvalidParameter("mu-sign needs '+' (or '1') and '-' symbols in \"" + alphabet.symbols() + "\"");
    }
    return TargetSequence::rule(
        [table, plus, minus](std::int64_t n) {
            const int m = table->mu(n);
            return m > 0 ? plus : (m < 0 ? minus : Alphabet::zero());
        },
        table->limit(), "mu-sign");
}

std::vector<std::int64_t> log_ladder(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t decade = 1; decade <= n; decade *= 10) {
        for (std::int64_t step : {1, 2, 5}) {
            if (decade * step < n) out.push_back(decade * step);
        }
        if (decade > n / 10) break;
    }
    if (n >= 1) out.push_back(n);
    return out;
}

CorrelationReport correlation_average(const PartialWindow& x, const WeightTable& rho, const SparseSetSpec& p,
                                      std::int64_t n, const std::vector<std::int64_t>& symbol_values,
                                      const TargetSequence* target) {
    if (n < 1) throw InvalidParameter("N must be >= 1");
    CorrelationReport report;
    report.weight = rho.description;
    report.p = p.describe();
    report.first_index = p.first_index();

    const auto ladder = log_ladder(n);
    auto next_row = ladder.begin();
    std::int64_t along_orbit = 0;
    std::int64_t along_target = 0;
    bool identity = true;
    for (std::int64_t i = 1; i <= n; ++i) {
        if (i >= p.first_index()) {
            const std::int64_t coord = p.value(i);
            if (!x.range().contains(coord)) {
                throw RangeError("p(" + std::to_string(i) + ") = " + std::to_string(coord) + " lies outside window " +
                                     to_string(x.range()),
                                 i);
            }
            const Symbol s = x.at(coord);
            if (s == kStar) throw RangeError("x(p(" + std::to_string(i) + ")) is undefined", i);
            const std::int64_t w = rho.at(i);
            along_orbit += w * symbol_values.at(s);
            if (target) along_target += w * symbol_values.at(target->at(i));
        }
        if (next_row != ladder.end() && *next_row == i) {
            report.rows.push_back({i, along_orbit, static_cast<double>(along_orbit) / static_cast<double>(i)});
            if (target && along_orbit != along_target) identity = false;
            ++next_row;
        }
    }
    if (target) report.exact_identity = identity;
    return report;
}

SarnakDemo sarnak_demo(Profile profile, int depth, std::int64_t n, std::uint64_t seed, const FillOptions& fill) {
    if (n < 1) throw InvalidParameter("N must be >= 1");
    const SparseSetSpec squares = SparseSetSpec::squares();
    const Alphabet alphabet(profile == Profile::faithful ? "01" : "0+-");
    ScheduleConfig config;
    config.seed = seed;
    Schedule schedule = build_schedule(alphabet, squares, depth, {1, squares.value(n)}, profile, config);

    const Interval window = schedule.construction_window();
    const auto sieve = std::make_shared<const MobiusTable>(std::max(n, max_index_in(squares, window)));
    const MobiusTable& table = *sieve;
    const TargetSequence u =
        profile == Profile::faithful ? mu_indicator_target(sieve, alphabet) : mu_sign_target(sieve, alphabet);

    PartialWindow x = realize(u, schedule, depth, fill);
    RealizationReport realization = verify_realization(x, u, squares);

    std::vector<BlockVerdict> verdicts;
    const std::int64_t top = schedule.m(depth);
    auto [first, last] = aligned_block_span(x.range(), top);
    for (std::int64_t i = first; i <= last; ++i) {
        verdicts.push_back({i, is_admissible_block(x.view(block_interval(i, top)), depth, schedule)});
    }
    std::optional<MembershipReport> membership;
    std::optional<MinimalityReport> minimality;
    if (profile == Profile::faithful) {
        if (schedule.level_words(depth - 1)) membership = aligned_membership(x, schedule, depth - 1);
        minimality = minimality_witnesses(x, schedule, depth);
    }

    const WeightTable mu = WeightTable::mobius(table);
    CorrelationReport correlation = correlation_average(x, mu, squares, n, default_symbol_values(alphabet), &u);

    std::int64_t ones = 0;
    for (std::int64_t i = 1; i <= n; ++i) ones += table.mu(i) == 1;
    const std::int64_t squarefree = table.squarefree_count(n);

    return SarnakDemo{std::move(schedule), fill,          u.description(),          std::move(x),
                      realization,        std::move(verdicts), membership, minimality,
                      std::move(correlation), squarefree, ones};
}

}  // namespace blockshift
