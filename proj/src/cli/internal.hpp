#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "coarselab/io.hpp"

namespace coarselab::cli {

std::string sha256_hex(const std::string& bytes);
std::string file_digest(const std::string& path);

// Reproducibility record embedded in every report.
struct Manifest {
  std::vector<std::string> command;
  std::map<std::string, std::string> inputs;  // path -> SHA-256
  std::map<std::string, std::string> params;
  double wall_time_s = 0.0;

  Json to_json() const;
};

// Aligned "key  value" rendering of a report for terminals.
std::string render_text(const Json& report);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string render_csv(const Table& t);
std::string format_number(double v);

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Self-contained SVG line chart.
std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series);

}  // namespace coarselab::cli
