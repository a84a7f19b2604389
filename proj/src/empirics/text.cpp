#include "infcartel/empirics/text.hpp"

#include <cctype>

namespace infcartel::empirics {

namespace {

bool is_ascii_letter(unsigned char c) { return std::isalpha(c) != 0; }
bool is_ascii_digit(unsigned char c) { return std::isdigit(c) != 0; }

// Number of UTF-8 code points in s.
std::size_t code_points(std::string_view s) {
  std::size_t n = 0;
  for (const char ch : s)
    if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80) ++n;
  return n;
}

bool has_letter(std::string_view s) {
  for (const char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || is_ascii_letter(c)) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> extract_hashtags(std::string_view raw_text) {
  std::string cleaned;
  cleaned.reserve(raw_text.size() * 2);
  for (const char ch : raw_text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80) {
      cleaned += ch;
    } else if (is_ascii_letter(c)) {
      cleaned += static_cast<char>(std::tolower(c));
    } else if (is_ascii_digit(c) || c == '_') {
      cleaned += ch;
    } else if (c == '#') {
      cleaned += " #";
    } else {
      cleaned += ' ';
    }
  }

  std::vector<std::string> tags;
  std::size_t i = 0;
  while (i < cleaned.size() && tags.size() < kMaxHashtagsPerPost) {
    while (i < cleaned.size() && cleaned[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < cleaned.size() && cleaned[i] != ' ') ++i;
    if (i > start && cleaned[start] == '#') tags.emplace_back(cleaned.substr(start, i - start));
  }

  std::vector<std::string> out;
  for (const std::string& tag : tags) {
    const std::string_view body = std::string_view(tag).substr(1);
    if (code_points(body) <= 1) continue;
    if (!has_letter(body)) continue;
    std::string token;
    for (const char ch : body) {
      const char c = (ch == '_' || ch == '#') ? ' ' : ch;
      if (c == ' ' && (token.empty() || token.back() == ' ')) continue;
      token += c;
    }
    while (!token.empty() && token.back() == ' ') token.pop_back();
    if (!token.empty()) out.push_back(std::move(token));
  }
  return out;
}

}  // namespace infcartel::empirics
