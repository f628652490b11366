#include <algorithm>
#include <cstdio>

#include "internal.hpp"

namespace coarselab::cli {
namespace {

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  return canonical_dump(j);
}

void render_into(const Json& j, const std::string& indent, std::string& out) {
  std::size_t width = 0;
  for (const auto& [k, v] : j.items()) width = std::max(width, k.size());
  for (const auto& [k, v] : j.items()) {
    std::string key = indent + k;
    key.resize(indent.size() + width, ' ');
    const bool flat_array = v.is_array() && std::all_of(v.begin(), v.end(), is_scalar);
    if (is_scalar(v) || flat_array) {
      out += key + "  " + (flat_array ? canonical_dump(v) : scalar_text(v)) + "\n";
    } else if (v.is_object()) {
      out += indent + k + "\n";
      render_into(v, indent + "  ", out);
    } else {
      out += indent + k + "\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (is_scalar(v[i]) || v[i].is_array()) {
          out += indent + "  - " + canonical_dump(v[i]) + "\n";
        } else {
          out += indent + "  [" + std::to_string(i) + "]\n";
          render_into(v[i], indent + "    ", out);
        }
      }
    }
  }
}

}  // namespace

std::string render_text(const Json& report) {
  std::string out;
  if (report.is_object()) {
    render_into(report, "", out);
  } else {
    out = canonical_dump(report) + "\n";
  }
  return out;
}

std::string format_number(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string render_csv(const Table& t) {
  auto line = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) s += ',';
      const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
      if (quote) {
        s += '"';
        for (char c : cells[i]) {
          if (c == '"') s += '"';
          s += c;
        }
        s += '"';
      } else {
        s += cells[i];
      }
    }
    return s + "\n";
  };
  std::string out = line(t.header);
  for (const auto& r : t.rows) out += line(r);
  return out;
}

}  // namespace coarselab::cli
