#pragma once

// The shared sequence text format: '#' comment lines, an optional leading
// "p=<int>" metadata line, then one positive integer per line in strictly
// increasing order. Rejections carry the offending line number.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "apfree/errors.hpp"
#include "apfree/integer_set.hpp"

namespace apfree {

struct SequenceFile {
  std::optional<int> p;
  IntegerSet set;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::optional<std::uint64_t> parse_u64(std::string_view s) {
  if (s.empty() || s.size() > 20) return std::nullopt;
  std::uint64_t v = 0;
  for (const char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    const std::uint64_t d = static_cast<std::uint64_t>(c - '0');
    if (v > (UINT64_MAX - d) / 10) return std::nullopt;
    v = v * 10 + d;
  }
  return v;
}

}  // namespace detail

inline SequenceFile parse_sequence_text(std::istream& in, const std::string& source) {
  SequenceFile out;
  std::vector<std::uint64_t> elems;
  std::string line;
  std::size_t lineno = 0;
  bool seen_value = false;
  std::uint64_t prev = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    const std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!seen_value && !out.p.has_value() && body.starts_with("p=")) {
      const auto v = detail::parse_u64(body.substr(2));
      if (!v || *v < 3 || *v > 1'000'000)
        throw ParseError(source, lineno, "invalid p metadata '" + std::string(body) + "'");
      out.p = static_cast<int>(*v);
      continue;
    }
    const auto v = detail::parse_u64(body);
    if (!v) throw ParseError(source, lineno, "expected a positive integer, got '" + std::string(body) + "'");
    if (*v == 0) throw ParseError(source, lineno, "elements must be positive");
    if (seen_value && *v <= prev)
      throw ParseError(source, lineno,
                       "elements must be strictly increasing: " + std::to_string(*v) +
                           " after " + std::to_string(prev));
    if (*v > IntegerSet::max_element)
      throw ParseError(source, lineno, "element exceeds the supported maximum");
    elems.push_back(*v);
    prev = *v;
    seen_value = true;
  }
  out.set = IntegerSet{std::move(elems)};
  return out;
}

inline SequenceFile load_sequence_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_sequence_text(in, path.string());
}

inline void write_sequence_text(std::ostream& out, const IntegerSet& s,
                                std::optional<int> p,
                                const std::vector<std::string>& trailing_comments = {}) {
  if (p) out << "p=" << *p << "\n";
  for (const auto e : s.elements()) out << e << "\n";
  for (const auto& c : trailing_comments) out << "# " << c << "\n";
}

inline void save_sequence_file(const std::filesystem::path& path, const IntegerSet& s,
                               std::optional<int> p) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_sequence_text(out, s, p);
  if (!out) throw IoError("write failed for " + path.string());
}

/// Cache file for the greedy sequence of a given p.
inline std::filesystem::path greedy_cache_path(const std::filesystem::path& dir, int p) {
  return dir / ("S_" + std::to_string(p) + ".txt");
}

}  // namespace apfree
