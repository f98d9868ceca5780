#ifndef CSALLOC_SVG_PLOT_HPP
#define CSALLOC_SVG_PLOT_HPP

#include <string>
#include <vector>

namespace csalloc::plot {

enum class Marker { None, Circle, Diamond, Cross };

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
    std::string color = "#1f77b4";
    bool line = true;
    Marker marker = Marker::None;
    double width = 1.5;
};

struct Figure {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<Series> series;
    int width_px = 720;
    int height_px = 420;
};

/// Render the figure to a standalone SVG string.
std::string render_svg(const Figure& figure);

/// Write the figure to `path`; throws std::runtime_error when the path is
/// not writable.
void write_svg(const Figure& figure, const std::string& path);

} // namespace csalloc::plot

#endif
