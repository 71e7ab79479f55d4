#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace evsim::plot {

struct Series {
    std::string label;
    std::vector<double> values;
    std::string color = "#1f77b4";
};

struct LineChart {
    std::string title;
    std::string y_label;
    std::vector<std::string> x_ticks; ///< one label per sample; thinned when drawn
    std::vector<Series> series;
    std::optional<double> reference_line; ///< e.g. transformer capacity
    std::string reference_label;
};

struct BarChart {
    std::string title;
    std::string y_label;
    std::vector<std::string> labels;
    std::vector<double> values;
    std::vector<std::string> colors; ///< per bar; default colour when empty
    std::vector<std::pair<std::string, std::string>> legend; ///< (label, colour)
};

std::string render(const LineChart& chart);
std::string render(const BarChart& chart);

void write_svg(const std::filesystem::path& path, const std::string& svg);

/// Categorical palette; cycles.
const std::string& palette(std::size_t index);

} // namespace evsim::plot
