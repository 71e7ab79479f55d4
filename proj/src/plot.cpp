#include "evsim/plot.hpp"

#include "evsim/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace evsim::plot {

namespace {

constexpr double kWidth = 960;
constexpr double kHeight = 480;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 70;

std::string esc(const std::string& s)
{
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

/// Rounded upper bound for the y axis.
double nice_max(double v)
{
    if (!(v > 0.0)) {
        return 1.0;
    }
    const double mag = std::pow(10.0, std::floor(std::log10(v)));
    for (const double step : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (step * mag >= v) {
            return step * mag;
        }
    }
    return 10.0 * mag;
}

void frame(std::ostringstream& svg, const std::string& title, const std::string& y_label, double y_max)
{
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << esc(title)
        << "</text>\n";
    const double plot_h = kHeight - kTop - kBottom;
    for (int i = 0; i <= 5; ++i) {
        const double v = y_max * i / 5.0;
        const double y = kTop + plot_h * (1.0 - i / 5.0);
        svg << "<line x1=\"" << kLeft << "\" y1=\"" << num(y) << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << num(y)
            << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << num(v)
            << "</text>\n";
    }
    svg << "<text transform=\"translate(16," << kTop + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << esc(y_label) << "</text>\n";
}

} // namespace

const std::string& palette(std::size_t index)
{
    static const std::array<std::string, 8> colours{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    return colours[index % colours.size()];
}

std::string render(const LineChart& chart)
{
    double y_max = chart.reference_line.value_or(0.0);
    std::size_t n = 0;
    for (const auto& s : chart.series) {
        for (const double v : s.values) {
            y_max = std::max(y_max, v);
        }
        n = std::max(n, s.values.size());
    }
    y_max = nice_max(y_max * 1.05);
    std::ostringstream svg;
    frame(svg, chart.title, chart.y_label, y_max);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto x_of = [&](std::size_t i) { return kLeft + (n > 1 ? plot_w * double(i) / double(n - 1) : plot_w / 2); };
    auto y_of = [&](double v) { return kTop + plot_h * (1.0 - v / y_max); };

    const std::size_t tick_every = std::max<std::size_t>(1, (chart.x_ticks.size() + 11) / 12);
    for (std::size_t i = 0; i < chart.x_ticks.size() && i < n; i += tick_every) {
        svg << "<text transform=\"translate(" << num(x_of(i)) << "," << kHeight - kBottom + 14
            << ") rotate(30)\" font-size=\"10\">" << esc(chart.x_ticks[i]) << "</text>\n";
    }
    if (chart.reference_line) {
        const double y = y_of(*chart.reference_line);
        svg << "<line x1=\"" << kLeft << "\" y1=\"" << num(y) << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << num(y)
            << "\" stroke=\"#d62728\" stroke-dasharray=\"6,4\"/>\n";
        svg << "<text x=\"" << kWidth - kRight - 4 << "\" y=\"" << num(y - 4) << "\" text-anchor=\"end\" fill=\"#d62728\">"
            << esc(chart.reference_label) << "</text>\n";
    }
    double legend_y = kTop + 12;
    for (const auto& s : chart.series) {
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            svg << num(x_of(i)) << ',' << num(y_of(s.values[i])) << ' ';
        }
        svg << "\"/>\n";
        svg << "<rect x=\"" << kLeft + 10 << "\" y=\"" << legend_y - 9 << "\" width=\"10\" height=\"10\" fill=\""
            << s.color << "\"/><text x=\"" << kLeft + 26 << "\" y=\"" << legend_y << "\">" << esc(s.label)
            << "</text>\n";
        legend_y += 16;
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string render(const BarChart& chart)
{
    double y_max = 0.0;
    for (const double v : chart.values) {
        y_max = std::max(y_max, v);
    }
    y_max = nice_max(y_max * 1.05);
    std::ostringstream svg;
    frame(svg, chart.title, chart.y_label, y_max);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const std::size_t n = chart.values.size();
    const double slot = n ? plot_w / double(n) : plot_w;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = plot_h * chart.values[i] / y_max;
        const std::string& colour = i < chart.colors.size() ? chart.colors[i] : palette(0);
        svg << "<rect x=\"" << num(kLeft + slot * double(i) + slot * 0.1) << "\" y=\"" << num(kTop + plot_h - h)
            << "\" width=\"" << num(slot * 0.8) << "\" height=\"" << num(h) << "\" fill=\"" << colour << "\"/>\n";
        if (i < chart.labels.size() && (n <= 40 || i % ((n + 39) / 40) == 0)) {
            svg << "<text transform=\"translate(" << num(kLeft + slot * (double(i) + 0.5)) << ","
                << kHeight - kBottom + 12 << ") rotate(60)\" font-size=\"9\">" << esc(chart.labels[i]) << "</text>\n";
        }
    }
    double legend_y = kTop + 12;
    for (const auto& [label, colour] : chart.legend) {
        svg << "<rect x=\"" << kLeft + 10 << "\" y=\"" << legend_y - 9 << "\" width=\"10\" height=\"10\" fill=\"" << colour
            << "\"/><text x=\"" << kLeft + 26 << "\" y=\"" << legend_y << "\">" << esc(label) << "</text>\n";
        legend_y += 16;
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_svg(const std::filesystem::path& path, const std::string& svg)
{
    std::ofstream out(path);
    if (!out) {
        throw InputError(path.string(), 0, "cannot write file");
    }
    out << svg;
}

} // namespace evsim::plot
