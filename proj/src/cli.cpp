#include "blockshift/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "blockshift/analysis.hpp"
#include "blockshift/arithmetic.hpp"
#include "blockshift/errors.hpp"
#include "blockshift/schedule.hpp"
#include "blockshift/window_file.hpp"

namespace blockshift {

namespace {

using Json = nlohmann::ordered_json;

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string count_text(const LevelCount& c) {
    if (c.exact) {
        const std::string digits = c.exact->str();
        if (digits.size() <= 30) return digits;
        return "exact, " + std::to_string(digits.size()) + " digits, ln = " + fixed(c.log_upper, 6);
    }
    return "ln in [" + fixed(c.log_lower, 6) + ", " + fixed(c.log_upper, 6) + "]";
}

Json count_json(const LevelCount& c) {
    Json j;
    if (c.exact) j["exact"] = c.exact->str();
    j["log_lower"] = c.log_lower;
    j["log_upper"] = c.log_upper;
    return j;
}

Json schedule_json(const Schedule& s) {
    Json levels = Json::array();
    for (const auto& level : s.levels) {
        levels.push_back({{"k", level.k},
                          {"m", level.m},
                          {"count", count_json(level.card)},
                          {"pillar_digest", word_digest(level.pillar.view())}});
    }
    return {{"alphabet", s.alphabet.symbols()},
            {"sparse", s.sparse.describe()},
            {"profile", to_string(s.profile)},
            {"seed", s.config.seed},
            {"window_hint", format_interval(s.window_hint)},
            {"verified_range", format_interval(s.verified_range)},
            {"levels", levels}};
}

Json verdict_json(const AdmissibilityVerdict& v) {
    return {{"result", to_string(v.result)},
            {"blocks", to_string(v.blocks)},
            {"pillar_share", v.pillar_share},
            {"every_word", to_string(v.every_word)},
            {"pillar_copies", v.pillar_copies},
            {"distinct_blocks", v.distinct_blocks},
            {"reason", v.reason}};
}

Json minimality_json(const MinimalityReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"k", c.k},
                          {"status", c.status},
                          {"observed", c.observed},
                          {"limit", c.limit},
                          {"detail", c.detail}});
    }
    return {{"passed", r.passed()}, {"checks", checks}};
}

Json correlation_json(const CorrelationReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows) rows.push_back({{"N", row.n}, {"numerator", row.numerator}, {"average", row.average}});
    Json j{{"weight", r.weight}, {"p", r.p}, {"first_index", r.first_index}, {"rows", rows}};
    if (r.exact_identity) j["exact_identity"] = *r.exact_identity;
    return j;
}

void write_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidParameter("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Schedule that produced a saved window, rebuilt from its header.
Schedule rebuild_schedule(const WindowFile& f, int& depth) {
    depth = static_cast<int>(std::stol(f.require("depth")));
    ScheduleConfig config;
    config.seed = std::stoull(f.require("seed"));
    return build_schedule(f.alphabet(), parse_sparse_spec(f.require("sparse")), depth,
                          parse_interval(f.require("window-hint")), parse_profile(f.require("profile")), config);
}

struct CheckRow {
    std::string name;
    bool passed;
    std::string detail;
};

int cmd_schedule(std::ostream& out, const std::string& alphabet, const std::string& sparse, int depth,
                 const std::string& profile, const std::string& window, std::uint64_t seed, const std::string& format) {
    ScheduleConfig config;
    config.seed = seed;
    const Schedule s = build_schedule(Alphabet(alphabet), parse_sparse_spec(sparse), depth, parse_interval(window),
                                      parse_profile(profile), config);
    if (format == "json") {
        write_json(out, schedule_json(s));
        return kExitOk;
    }
    out << "# alphabet=" << s.alphabet.symbols() << " sparse=" << s.sparse.describe()
        << " profile=" << to_string(s.profile) << " verified=" << format_interval(s.verified_range) << '\n';
    out << "k\tm_k\t|A_k|\tw_k\n";
    for (const auto& level : s.levels) {
        out << level.k << '\t' << level.m << '\t' << count_text(level.card) << '\t' << word_digest(level.pillar.view())
            << '\n';
    }
    return kExitOk;
}

int cmd_realize(std::ostream& out, const std::string& alphabet_text, const std::string& sparse_text, int depth,
                const std::string& profile, const std::string& window, std::uint64_t seed, std::uint64_t cycle_offset,
                const std::string& target, const std::string& path) {
    ScheduleConfig config;
    config.seed = seed;
    const Alphabet alphabet(alphabet_text);
    const SparseSetSpec sparse = parse_sparse_spec(sparse_text);
    const Schedule s = build_schedule(alphabet, sparse, depth, parse_interval(window), parse_profile(profile), config);
    const TargetSequence u = make_target(target, alphabet, sparse, s.construction_window());
    const FillOptions fill{cycle_offset};
    PartialWindow x = realize(u, s, depth, fill);
    const WindowFile f = make_window_file(s, depth, target, fill, std::move(x));
    save_window(path, f);
    out << "wrote " << path << ": " << f.window.size() << " cells on " << format_interval(f.window.range())
        << " checksum " << payload_checksum(alphabet, f.window) << '\n';
    return kExitOk;
}

int cmd_verify(std::ostream& out, std::ostream& err, const std::string& path) {
    WindowFile f;
    try {
        f = load_window(path);
    } catch (const ChecksumError& e) {
        out << "checksum\tfail\t" << e.what() << '\n';
        err << e.what() << '\n';
        return kExitVerifyFailed;
    } catch (const FormatError& e) {
        out << "format\tfail\t" << e.what() << '\n';
        err << e.what() << '\n';
        return kExitVerifyFailed;
    }
    std::vector<CheckRow> rows;
    rows.push_back({"checksum", true, payload_checksum(f.alphabet(), f.window)});

    int depth = 0;
    const Schedule s = rebuild_schedule(f, depth);
    std::string ms;
    for (int k = 0; k <= depth; ++k) ms += (k ? "," : "") + std::to_string(s.m(k));
    rows.push_back({"schedule", ms == f.require("schedule"), "rebuilt m-list " + ms});

    const PartialWindow& x = f.window;
    const std::int64_t top = s.m(depth);
    bool aligned = true;
    try {
        (void)aligned_block_span(x.range(), top);
    } catch (const AlignmentError& e) {
        aligned = false;
        rows.push_back({"alignment", false, e.what()});
    }
    rows.push_back({"defined", x.fully_defined(), x.fully_defined() ? "no STAR cells" : "window holds STAR cells"});

    const TargetSequence u = make_target(f.require("target"), f.alphabet(), s.sparse, x.range());
    const RealizationReport realized = verify_realization(x, u, s.sparse);
    rows.push_back({"realization", realized.passed, realized.detail});

    if (aligned) {
        auto [first, last] = aligned_block_span(x.range(), top);
        std::int64_t admissible = 0;
        std::string first_bad;
        for (std::int64_t i = first; i <= last; ++i) {
            const auto v = is_admissible_block(x.view(block_interval(i, top)), depth, s);
            if (v.result == Tri::yes) {
                ++admissible;
            } else if (first_bad.empty()) {
                first_bad = "; block " + std::to_string(i) + ": " + v.reason;
            }
        }
        const std::int64_t total = last - first + 1;
        rows.push_back({"admissibility", admissible == total,
                        std::to_string(admissible) + " of " + std::to_string(total) + " level-" +
                            std::to_string(depth) + " blocks admissible" + first_bad});

        if (s.profile == Profile::faithful && s.level_words(depth - 1)) {
            const MembershipReport m = aligned_membership(x, s, depth - 1);
            rows.push_back({"membership", m.members == m.blocks,
                            std::to_string(m.members) + " of " + std::to_string(m.blocks) + " level-" +
                                std::to_string(depth - 1) + " blocks in A_" + std::to_string(depth - 1) + ", " +
                                std::to_string(m.distinct) + " distinct"});
        }
        if (x.fully_defined()) {
            const MinimalityReport mr = minimality_witnesses(x, s, depth);
            for (const auto& c : mr.checks) {
                rows.push_back({c.name + "(k=" + std::to_string(c.k) + ")", c.status != "fail",
                                c.status + ": " + c.detail});
            }
        }
    }

    bool all = true;
    out << "check\tresult\tdetail\n";
    for (const auto& r : rows) {
        all = all && r.passed;
        out << r.name << '\t' << (r.passed ? "pass" : "fail") << '\t' << r.detail << '\n';
    }
    out << (all ? "PASS" : "FAIL") << '\n';
    return all ? kExitOk : kExitVerifyFailed;
}

int cmd_complexity(std::ostream& out, const std::string& path, int n_max, const std::string& format) {
    const WindowFile f = load_window(path);
    ComplexityReport report = complexity_profile(f.window, n_max, path);
    if (auto ms = f.get("schedule")) {
        std::istringstream in(*ms);
        std::string item;
        while (std::getline(in, item, ',')) {
            const std::int64_t m = std::stoll(item);
            try {
                report.aligned[m] = aligned_distinct_blocks(f.window, m);
            } catch (const AlignmentError&) {
            }
        }
    }
    if (format == "json") {
        Json counts = Json::array();
        for (auto [n, c] : report.counts) counts.push_back({{"n", n}, {"distinct", c}});
        Json aligned = Json::array();
        for (auto [m, c] : report.aligned) aligned.push_back({{"m", m}, {"distinct", c}});
        write_json(out, {{"source", report.source},
                         {"window_length", report.window_length},
                         {"note", "window lower bounds on |L_n(X)|"},
                         {"subwords", counts},
                         {"aligned_blocks", aligned}});
        return kExitOk;
    }
    out << "kind,length,distinct\n";
    for (auto [n, c] : report.counts) out << "subword," << n << ',' << c << '\n';
    for (auto [m, c] : report.aligned) out << "aligned," << m << ',' << c << '\n';
    return kExitOk;
}

int cmd_demo(std::ostream& out, const std::string& profile_text, int depth, std::int64_t n, std::uint64_t seed,
             std::uint64_t cycle_offset, const std::string& format) {
    const Profile profile = parse_profile(profile_text);
    const SarnakDemo demo = sarnak_demo(profile, depth, n, seed, FillOptions{cycle_offset});
    const double target_quotient = static_cast<double>(profile == Profile::faithful ? demo.mobius_ones : demo.squarefree) /
                                   static_cast<double>(n);
    if (format == "csv") {
        out << "N,numerator,average\n";
        for (const auto& row : demo.correlation.rows) out << row.n << ',' << row.numerator << ',' << fixed(row.average, 9) << '\n';
        return kExitOk;
    }
    Json admissibility = Json::array();
    for (const auto& b : demo.admissibility) {
        Json v = verdict_json(b.verdict);
        v["block"] = b.block;
        admissibility.push_back(v);
    }
    Json invariants{{"realization",
                     {{"passed", demo.realization.passed},
                      {"checked", demo.realization.checked},
                      {"detail", demo.realization.detail}}},
                    {"admissibility", admissibility}};
    if (demo.membership) {
        invariants["membership"] = {{"level", depth - 1},
                                    {"blocks", demo.membership->blocks},
                                    {"members", demo.membership->members},
                                    {"distinct", demo.membership->distinct}};
    }
    if (demo.minimality) invariants["minimality"] = minimality_json(*demo.minimality);
    Json recurrence = Json::array();
    for (const auto& r : recurrence_check(demo.schedule)) {
        recurrence.push_back({{"k", r.k}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}});
    }
    invariants["recurrence"] = recurrence;
    Json decay = Json::array();
    for (const auto& r : decay_check(demo.schedule)) {
        decay.push_back({{"k", r.k},
                         {"b", r.b},
                         {"corrected", r.corrected},
                         {"holds_corrected", r.holds_corrected},
                         {"original", r.original},
                         {"holds_original", r.holds_original}});
    }
    invariants["decay"] = decay;
    invariants["entropy_bound_k20"] = entropy_bound_series(demo.schedule, 20).back().bound;

    write_json(out, {{"profile", to_string(profile)},
                     {"depth", depth},
                     {"N", n},
                     {"target", demo.target},
                     {"fill", {{"cycle_offset", demo.fill.cycle_offset}, {"seed", seed}}},
                     {"schedule", schedule_json(demo.schedule)},
                     {"window",
                      {{"range", format_interval(demo.window.range())},
                       {"checksum", payload_checksum(demo.schedule.alphabet, demo.window)}}},
                     {"invariants", invariants},
                     {"correlation", correlation_json(demo.correlation)},
                     {"reference",
                      {{"mobius_ones", demo.mobius_ones},
                       {"squarefree", demo.squarefree},
                       {"target_quotient", target_quotient},
                       {"six_over_pi_squared", 6.0 / (std::numbers::pi * std::numbers::pi)}}}});
    return kExitOk;
}

int cmd_density(std::ostream& out, const std::string& sparse, std::int64_t length, const std::string& range_text,
                std::int64_t m_k) {
    if (length < 1) throw InvalidParameter("--L must be >= 1");
    if (m_k < 1) throw InvalidParameter("--mk must be >= 1");
    const SparseSetSpec s = parse_sparse_spec(sparse);
    const Interval range = parse_interval(range_text);
    const WindowCount best = max_window_count(s, length, range);
    const bool violates = best.count * 3 * m_k >= length;
    out << "max=" << best.count << " quotient=" << fixed(static_cast<double>(best.count) / static_cast<double>(length), 4)
        << (violates ? " violates" : " satisfies") << " 1/(3·" << m_k << ") witness=" << format_interval(best.witness)
        << '\n';
    return violates ? kExitDensity : kExitOk;
}

}  // namespace

TargetSequence make_target(const std::string& spec, const Alphabet& alphabet, const SparseSetSpec& s,
                           Interval window) {
    if (spec == "mu-indicator" || spec == "mu-sign") {
        const std::int64_t n = std::max<std::int64_t>(1, max_index_in(s, window));
        auto table = std::make_shared<const MobiusTable>(n);
        return spec == "mu-indicator" ? mu_indicator_target(table, alphabet) : mu_sign_target(table, alphabet);
    }
    if (spec.starts_with("file:")) {
        const std::string text = read_text(spec.substr(5));
        std::vector<Symbol> values;
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            if (!line.empty() && line[0] == '#') continue;
            for (char c : line) {
                if (std::isspace(static_cast<unsigned char>(c))) continue;
                const Symbol sym = alphabet.index_of(c);
                if (sym == kStar) throw InvalidParameter(std::string("target symbol '") + c + "' not in alphabet");
                values.push_back(sym);
            }
        }
        return TargetSequence::explicit_list(std::move(values), spec);
    }
    throw InvalidParameter("unknown target \"" + spec + "\" (expected mu-indicator, mu-sign or file:PATH)");
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Block-concatenation subshifts realizing a target sequence along a sparse set"};
    app.require_subcommand(1);

    std::string alphabet = "01";
    std::string sparse = "squares";
    std::string profile = "faithful";
    std::string window = "none";
    std::string format;
    std::string target = "mu-indicator";
    std::string path;
    std::string range;
    int depth = 1;
    int demo_depth = 2;
    int n_max = 24;
    std::int64_t n = 832;
    std::int64_t length = 0;
    std::int64_t m_k = 1;
    std::uint64_t seed = 0;
    std::uint64_t cycle_offset = 0;

    const std::string sparse_help = "squares | monomial:D | power:P/Q | nlogn | evens | list:a,b,.. | file:PATH";
    auto schedule_format_help =
        "text: one row per level (k, m_k, |A_k| exact or ln bounds, FNV-1a digest of w_k); "
        "json: alphabet, sparse, profile, seed, window_hint, verified_range, levels[k, m, count, pillar_digest]";

    auto* sched = app.add_subcommand("schedule", "Print the level table");
    sched->add_option("--alphabet", alphabet, "Symbols; the first is the zero symbol")->capture_default_str();
    sched->add_option("--sparse", sparse, sparse_help)->capture_default_str();
    sched->add_option("--depth", depth, "Number of levels")->required();
    sched->add_option("--profile", profile, "faithful | fast")->capture_default_str();
    sched->add_option("--window", window, "lo:hi coordinates the construction must cover")->capture_default_str();
    sched->add_option("--seed", seed, "Seed for fast-profile sampling")->capture_default_str();
    sched->add_option("--format", format, schedule_format_help)->check(CLI::IsMember({"text", "json"}));

    auto* real = app.add_subcommand("realize", "Build a window realizing u along S and save it");
    real->add_option("--alphabet", alphabet)->capture_default_str();
    real->add_option("--sparse", sparse, sparse_help)->capture_default_str();
    real->add_option("--depth", depth)->required();
    real->add_option("--profile", profile, "faithful | fast")->capture_default_str();
    real->add_option("--window", window, "lo:hi coordinates the window must cover")->capture_default_str();
    real->add_option("--seed", seed)->capture_default_str();
    real->add_option("--cycle-offset", cycle_offset, "Rotation of the per-block cycle through A_k")->capture_default_str();
    real->add_option("--u", target, "mu-indicator | mu-sign | file:PATH")->capture_default_str();
    real->add_option("--out", path, "Window file to write")->required();

    auto* ver = app.add_subcommand("verify", "Recheck a saved window; prints check, result, detail rows");
    ver->add_option("file", path)->required();

    auto* comp = app.add_subcommand(
        "complexity",
        "Distinct subword counts of a saved window. csv columns: kind (subword|aligned), length, distinct");
    comp->add_option("file", path)->required();
    comp->add_option("--nmax", n_max)->capture_default_str();
    comp->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    auto* demo = app.add_subcommand(
        "demo-sarnak",
        "Mobius correlation along squares. csv columns: N, numerator, average; json adds schedule, invariants, "
        "reference counts");
    demo->add_option("--profile", profile, "faithful | fast")->capture_default_str();
    demo->add_option("--depth", demo_depth)->capture_default_str();
    demo->add_option("--N", n)->capture_default_str();
    demo->add_option("--seed", seed)->capture_default_str();
    demo->add_option("--cycle-offset", cycle_offset)->capture_default_str();
    demo->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    auto* dens = app.add_subcommand("density", "Densest length-L window of S; exit 3 when it breaks 1/(3 m_k)");
    dens->add_option("--sparse", sparse, sparse_help)->capture_default_str();
    dens->add_option("--L", length)->required();
    dens->add_option("--range", range, "lo:hi")->required();
    dens->add_option("--mk", m_k)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kExitUsage;
    }

    try {
        if (*sched) return cmd_schedule(out, alphabet, sparse, depth, profile, window, seed, format.empty() ? "text" : format);
        if (*real) return cmd_realize(out, alphabet, sparse, depth, profile, window, seed, cycle_offset, target, path);
        if (*ver) return cmd_verify(out, err, path);
        if (*comp) return cmd_complexity(out, path, n_max, format.empty() ? "csv" : format);
        if (*demo) return cmd_demo(out, profile, demo_depth, n, seed, cycle_offset, format.empty() ? "json" : format);
        if (*dens) return cmd_density(out, sparse, length, range, m_k);
    } catch (const DensityViolation& e) {
        err << "density violation: " << e.what() << " (witness " << format_interval(e.witness()) << ", "
            << e.count() << " elements)\n";
        return kExitDensity;
    } catch (const InfeasibleDepth& e) {
        err << "infeasible: " << e.what() << '\n';
        return kExitDensity;
    } catch (const InvalidParameter& e) {
        err << "usage: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitVerifyFailed;
    }
    return kExitUsage;
}

}  // namespace blockshift
