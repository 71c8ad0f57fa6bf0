#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace pdm::cli {

/// Shortest round-trip decimal form (at most 17 significant digits).
std::string format_double(double v);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::span<const double> cells);
  /// Integer-valued columns are still written through format_double.
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::string body_;
};

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static line plot with axes, ticks and a legend.
std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series);

}  // namespace pdm::cli
