#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "blockshift/core_words.hpp"
#include "blockshift/realization.hpp"
#include "blockshift/schedule.hpp"

namespace blockshift {

inline constexpr std::string_view kWindowFormatTag = "BLOCKSHIFT/1";
inline constexpr std::size_t kPayloadLineCells = std::size_t{1} << 16;

/// A persisted window. The header is an ordered key=value list; save writes it back in the same order.
///
/// File layout:
///   BLOCKSHIFT/1
///   key=value        (one per line; alphabet, offset and length are required)
///   payload
///   <cells, one character each, '*' for STAR, a newline after every 65536 cells>
///   checksum=<16 hex digits, FNV-1a 64 of the payload characters>
struct WindowFile {
    std::vector<std::pair<std::string, std::string>> header;
    PartialWindow window{0, {kStar}};

    std::optional<std::string> get(std::string_view key) const;
    // Throws FormatError when the key is missing.
    const std::string& require(std::string_view key) const;
    void set(std::string key, std::string value);

    Alphabet alphabet() const { return Alphabet(require("alphabet")); }
};

/// Header for a realized window, in canonical key order.
WindowFile make_window_file(const Schedule& schedule, int depth, const std::string& target,
                            const FillOptions& fill, PartialWindow window);

std::string payload_checksum(const Alphabet& alphabet, const PartialWindow& window);

std::string serialize_window(const WindowFile& file);
/// Throws VersionError, ChecksumError, InconsistencyError or FormatError.
WindowFile parse_window(std::string_view text);

void save_window(const std::string& path, const WindowFile& file);
WindowFile load_window(const std::string& path);

std::string format_interval(Interval iv);  // "lo:hi", or "none" when empty
Interval parse_interval(const std::string& text);

}  // namespace blockshift
