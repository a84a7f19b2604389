#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace infcartel::empirics {

inline constexpr std::size_t kMaxHashtagsPerPost = 30;

/// Hashtag tokens of a post:
///   lower-case; anything other than a letter, digit, '_' or '#' becomes a
///   space; a space goes before every '#'; only '#'-initial words survive;
///   the first 30 are kept; one-character and letter-free tags are dropped;
///   '#' and '_' then become spaces (runs collapsed, ends trimmed).
///
/// Text is UTF-8. ASCII letters are lower-cased; every non-ASCII code point
/// counts as a letter and passes through unchanged.
std::vector<std::string> extract_hashtags(std::string_view raw_text);

}  // namespace infcartel::empirics
