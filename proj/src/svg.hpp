#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gsmooth::detail {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal self-contained SVG charts for experiment outputs.
void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series);

void write_bar_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<double>& heights);

}  // namespace gsmooth::detail
