#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

#include <json.hpp>

#include "duplex/interval.hpp"

namespace duplex {

using json = nlohmann::json;

namespace detail {

inline void write_fixed(std::string& out, const json& j, int decimals, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write_fixed(out, it.value(), decimals, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write_fixed(out, v, decimals, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) throw ValidationError("cannot serialize a non-finite number");
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
      std::string s(buf);
      // "-0.000" prints as "0.000"
      if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
      out += s;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Serializes `j` with every floating-point number in fixed notation.
inline std::string dump_fixed(const json& j, int decimals, int indent = 2) {
  std::string out;
  detail::write_fixed(out, j, decimals, indent, 0);
  return out;
}

inline double ms_to_seconds(Millis ms) { return static_cast<double>(ms) / 1000.0; }

/// Parses a non-negative decimal-seconds string ("1.2", "4.0") into ms, rounding half up.
inline Millis parse_decimal_seconds(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  const std::string_view s = trim(text);
  const auto bad = [&] { return ValidationError("malformed time value '" + std::string(text) + "'"); };
  if (s.empty()) throw bad();
  Millis whole = 0;
  std::size_t i = 0;
  bool any_digit = false;
  for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
    whole = whole * 10 + (s[i] - '0');
    if (whole > 1'000'000'000'000) throw bad();
    any_digit = true;
  }
  Millis frac_ms = 0;
  if (i < s.size() && s[i] == '.') {
    ++i;
    int place = 0;
    bool round_up = false;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i, ++place) {
      any_digit = true;
      const int d = s[i] - '0';
      if (place < 3) {
        frac_ms = frac_ms * 10 + d;
      } else if (place == 3) {
        round_up = d >= 5;
      }
    }
    for (int p = std::min(place, 3); p < 3; ++p) frac_ms *= 10;
    if (round_up) ++frac_ms;
  }
  if (!any_digit || i != s.size()) throw bad();
  return whole * 1000 + frac_ms;
}

/// Accepts a JSON number or decimal-second string and returns ms.
inline Millis seconds_to_ms(const json& value) {
  if (value.is_string()) return parse_decimal_seconds(value.get<std::string>());
  if (value.is_number_unsigned() || value.is_number_integer()) {
    const auto v = value.get<std::int64_t>();
    if (v < 0) throw ValidationError("negative time value " + value.dump());
    return v * 1000;
  }
  if (value.is_number_float()) {
    const double v = value.get<double>();
    if (!std::isfinite(v) || v < 0) throw ValidationError("invalid time value " + value.dump());
    const std::string repr = value.dump();
    if (repr.find_first_of("eE") == std::string::npos) return parse_decimal_seconds(repr);
    return static_cast<Millis>(std::floor(v * 1000.0 + 0.5));
  }
  throw ValidationError("time value must be a number or decimal string, got " + value.dump());
}

}  // namespace duplex
