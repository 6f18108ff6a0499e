#include "blockshift/window_file.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "blockshift/errors.hpp"
#include "blockshift/hashing.hpp"

namespace blockshift {

namespace {

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw FormatError("header " + key + "=" + text + " is not an integer");
    }
    return v;
}

std::string join(const std::vector<std::int64_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

// Splits on '\n'. The text must end with a newline.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        const std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) throw FormatError("window file does not end with a newline");
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

}  // namespace

std::optional<std::string> WindowFile::get(std::string_view key) const {
    for (const auto& [k, v] : header) {
        if (k == key) return v;
    }
    return std::nullopt;
}

const std::string& WindowFile::require(std::string_view key) const {
    for (const auto& [k, v] : header) {
        if (k == key) return v;
    }
    throw FormatError("window header lacks " + std::string(key));
}

void WindowFile::set(std::string key, std::string value) {
    for (auto& [k, v] : header) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    header.emplace_back(std::move(key), std::move(value));
}

std::string format_interval(Interval iv) {
    if (iv.empty()) return "none";
    return std::to_string(iv.lo) + ":" + std::to_string(iv.hi);
}

Interval parse_interval(const std::string& text) {
    if (text == "none") return {};
    const auto colon = text.find(':', 1);
    if (colon == std::string::npos) throw InvalidParameter("expected lo:hi, got \"" + text + "\"");
    Interval iv;
    try {
        std::size_t used = 0;
        iv.lo = std::stoll(text.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument(text);
        const std::string hi = text.substr(colon + 1);
        iv.hi = std::stoll(hi, &used);
        if (used != hi.size()) throw std::invalid_argument(text);
    } catch (const std::logic_error&) {
        throw InvalidParameter("expected lo:hi, got \"" + text + "\"");
    }
    if (iv.empty()) throw InvalidParameter("interval " + text + " is empty");
    return iv;
}

WindowFile make_window_file(const Schedule& schedule, int depth, const std::string& target,
                            const FillOptions& fill, PartialWindow window) {
    std::vector<std::int64_t> ms;
    for (int k = 0; k <= depth; ++k) ms.push_back(schedule.m(k));
    WindowFile f;
    f.header = {
        {"alphabet", schedule.alphabet.symbols()},
        {"profile", to_string(schedule.profile)},
        {"depth", std::to_string(depth)},
        {"schedule", join(ms)},
        {"sparse", schedule.sparse.describe()},
        {"target", target},
        {"fill", "pillar-first-left-to-right"},
        {"cycle", schedule.profile == Profile::faithful ? "lexicographic-per-block" : "sampled"},
        {"cycle-offset", std::to_string(fill.cycle_offset)},
        {"mix", "splitmix64"},
        {"seed", std::to_string(schedule.config.seed)},
        {"window-hint", format_interval(schedule.window_hint)},
        {"offset", std::to_string(window.offset())},
        {"length", std::to_string(window.size())},
    };
    f.window = std::move(window);
    return f;
}

std::string payload_checksum(const Alphabet& alphabet, const PartialWindow& window) {
    Fnv1a h;
    std::string chunk;
    auto cells = window.cells();
    for (std::size_t i = 0; i < cells.size(); i += kPayloadLineCells) {
        chunk = render(alphabet, cells.subspan(i, std::min(kPayloadLineCells, cells.size() - i)));
        h.update(chunk);
    }
    return hex16(h.digest());
}

std::string serialize_window(const WindowFile& file) {
    const Alphabet alphabet = file.alphabet();
    const PartialWindow& x = file.window;
    if (parse_int("offset", file.require("offset")) != x.offset() ||
        parse_int("length", file.require("length")) != static_cast<std::int64_t>(x.size())) {
        throw InconsistencyError("header offset/length disagree with the window");
    }
    std::string out;
    out.reserve(x.size() + x.size() / kPayloadLineCells + 1024);
    out += kWindowFormatTag;
    out += '\n';
    for (const auto& [k, v] : file.header) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    out += "payload\n";
    Fnv1a h;
    auto cells = x.cells();
    for (std::size_t i = 0; i < cells.size(); i += kPayloadLineCells) {
        const std::string line = render(alphabet, cells.subspan(i, std::min(kPayloadLineCells, cells.size() - i)));
        h.update(line);
        out += line;
        out += '\n';
    }
    out += "checksum=" + hex16(h.digest()) + "\n";
    return out;
}

WindowFile parse_window(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw FormatError("empty window file");
    if (lines[0] != kWindowFormatTag) {
        if (lines[0].starts_with("BLOCKSHIFT/")) {
            throw VersionError("unsupported window format " + std::string(lines[0]) + " (expected " +
                               std::string(kWindowFormatTag) + ")");
        }
        throw FormatError("not a window file (missing " + std::string(kWindowFormatTag) + " tag)");
    }

    WindowFile f;
    std::size_t i = 1;
    for (; i < lines.size() && lines[i] != "payload"; ++i) {
        const auto eq = lines[i].find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw FormatError("bad header line \"" + std::string(lines[i]) + "\"");
        }
        std::string key(lines[i].substr(0, eq));
        if (f.get(key)) throw FormatError("duplicate header key " + key);
        f.header.emplace_back(std::move(key), std::string(lines[i].substr(eq + 1)));
    }
    if (i == lines.size()) throw FormatError("window file has no payload section");
    ++i;

    const Alphabet alphabet = f.alphabet();
    const std::int64_t offset = parse_int("offset", f.require("offset"));
    const std::int64_t length = parse_int("length", f.require("length"));
    if (length < 1) throw InconsistencyError("window length must be positive");

    std::string payload;
    Fnv1a h;
    std::size_t payload_lines = 0;
    for (; i < lines.size() && !lines[i].starts_with("checksum="); ++i, ++payload_lines) {
        if (lines[i].empty() || lines[i].size() > kPayloadLineCells) {
            throw FormatError("payload line " + std::to_string(payload_lines + 1) + " has " +
                              std::to_string(lines[i].size()) + " cells");
        }
        if (!payload.empty() && payload.size() % kPayloadLineCells != 0) {
            throw FormatError("short payload line before the last one");
        }
        h.update(lines[i]);
        payload += lines[i];
    }
    if (i == lines.size()) throw FormatError("window file has no checksum line");
    if (i + 1 != lines.size()) throw FormatError("trailing data after the checksum line");

    if (static_cast<std::int64_t>(payload.size()) != length) {
        throw InconsistencyError("header length " + std::to_string(length) + " but payload holds " +
                                 std::to_string(payload.size()) + " cells");
    }
    const std::string declared(lines[i].substr(9));
    const std::string actual = hex16(h.digest());
    if (declared != actual) {
        throw ChecksumError("checksum mismatch: header says " + declared + ", payload hashes to " + actual);
    }
    for (std::size_t c = 0; c < payload.size(); ++c) {
        if (payload[c] != '*' && alphabet.index_of(payload[c]) == kStar) {
            throw InconsistencyError("payload cell " + std::to_string(offset + static_cast<std::int64_t>(c)) +
                                     " holds '" + std::string(1, payload[c]) + "', not in alphabet \"" +
                                     alphabet.symbols() + "\"");
        }
    }
    f.window = PartialWindow::parse(alphabet, offset, payload);
    return f;
}

void save_window(const std::string& path, const WindowFile& file) {
    const std::string text = serialize_window(file);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidParameter("cannot write " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw InvalidParameter("write to " + path + " failed");
}

WindowFile load_window(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidParameter("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_window(buf.str());
}

}  // namespace blockshift
