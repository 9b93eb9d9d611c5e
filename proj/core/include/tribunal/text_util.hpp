#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tribunal::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
bool contains_icase(std::string_view haystack, std::string_view needle);
bool starts_with_icase(std::string_view s, std::string_view prefix);
std::vector<std::string> split_lines(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
/// Host part of a URL, lower-cased, without a leading "www.".
std::string url_host(std::string_view url);
/// Stable 64-bit FNV-1a hash; used for deterministic choices keyed by ids.
std::uint64_t stable_hash(std::string_view s);

}  // namespace tribunal::text
