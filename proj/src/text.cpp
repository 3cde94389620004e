/* Copyright 2026 The detoxaudit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "text.hpp"

#include <cctype>

namespace detoxaudit {
namespace {

enum class CharClass { kWord, kKeep, kSeparator };

// UTF-8 sequences treated as punctuation. U+2018/U+2019 map to '\''.
struct Utf8Punct {
  std::string_view bytes;
  char replacement;  // '\0' means separator
};

constexpr Utf8Punct kUtf8Punct[] = {
    {"\xE2\x80\x98", '\''}, {"\xE2\x80\x99", '\''}, {"\xE2\x80\x9C", '\0'},
    {"\xE2\x80\x9D", '\0'}, {"\xE2\x80\x93", '\0'}, {"\xE2\x80\x94", '\0'},
    {"\xE2\x80\xA6", '\0'}, {"\xC2\xA0", '\0'},
};

bool IsAlnumToken(const std::string& token) {
  for (unsigned char c : token) {
    if (std::isalnum(c) || c >= 0x80) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&]() {
    std::size_t b = 0;
    std::size_t e = current.size();
    while (b < e && current[b] == '\'') ++b;
    while (e > b && current[e - 1] == '\'') --e;
    std::string token = current.substr(b, e - b);
    if (IsAlnumToken(token)) tokens.push_back(std::move(token));
    current.clear();
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c >= 0x80) {
      bool matched = false;
      for (const auto& p : kUtf8Punct) {
        if (text.substr(i, p.bytes.size()) == p.bytes) {
          if (p.replacement) {
            current.push_back(p.replacement);
          } else {
            flush();
          }
          i += p.bytes.size();
          matched = true;
          break;
        }
      }
      if (!matched) {
        current.push_back(static_cast<char>(c));
        ++i;
      }
      continue;
    }
    if (std::isalnum(c) || c == '\'' || c == '*') {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
    ++i;
  }
  flush();
  return tokens;
}

std::vector<std::string> SplitLines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

std::string_view TrimView(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detoxaudit
