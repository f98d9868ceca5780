#include "csalloc/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace csalloc::plot {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c; break;
        }
    }
    return out;
}

struct Mapper {
    double vx, vy, vw, vh;
    double xmin, xmax, ymin, ymax;

    double mx(double x) const {
        double range = xmax - xmin;
        if (range == 0.0) range = 1.0;
        return vx + (x - xmin) / range * vw;
    }
    double my(double y) const {
        double range = ymax - ymin;
        if (range == 0.0) range = 1.0;
        return vy + (1.0 - (y - ymin) / range) * vh;
    }
};

std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    if (hi <= lo) return {lo};
    double raw = (hi - lo) / target;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double norm = raw / mag;
    double step = (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0) * mag;
    std::vector<double> ticks;
    double first = std::ceil(lo / step) * step;
    for (double t = first; t <= hi + step * 1e-9; t += step) ticks.push_back(t);
    return ticks;
}

void emit_marker(std::ostringstream& svg, Marker marker, double cx, double cy,
                 const std::string& color) {
    constexpr double r = 3.5;
    switch (marker) {
    case Marker::Circle:
        svg << "    <circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << r
            << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\"/>\n";
        break;
    case Marker::Diamond:
        svg << "    <path d=\"M" << fmt(cx) << " " << fmt(cy - r) << " L" << fmt(cx + r) << " "
            << fmt(cy) << " L" << fmt(cx) << " " << fmt(cy + r) << " L" << fmt(cx - r) << " "
            << fmt(cy) << " Z\" fill=\"" << color << "\"/>\n";
        break;
    case Marker::Cross:
        svg << "    <path d=\"M" << fmt(cx - r) << " " << fmt(cy - r) << " L" << fmt(cx + r)
            << " " << fmt(cy + r) << " M" << fmt(cx - r) << " " << fmt(cy + r) << " L"
            << fmt(cx + r) << " " << fmt(cy - r) << "\" stroke=\"" << color
            << "\" stroke-width=\"1.4\"/>\n";
        break;
    case Marker::None: break;
    }
}

} // namespace

std::string render_svg(const Figure& figure) {
    const double margin_left = 60, margin_right = 16, margin_top = 34, margin_bottom = 48;
    Mapper m;
    m.vx = margin_left;
    m.vy = margin_top;
    m.vw = figure.width_px - margin_left - margin_right;
    m.vh = figure.height_px - margin_top - margin_bottom;

    m.xmin = m.ymin = std::numeric_limits<double>::infinity();
    m.xmax = m.ymax = -std::numeric_limits<double>::infinity();
    for (const Series& s : figure.series) {
        for (double x : s.x) {
            m.xmin = std::min(m.xmin, x);
            m.xmax = std::max(m.xmax, x);
        }
        for (double y : s.y) {
            m.ymin = std::min(m.ymin, y);
            m.ymax = std::max(m.ymax, y);
        }
    }
    if (!std::isfinite(m.xmin)) m.xmin = 0, m.xmax = 1;
    if (!std::isfinite(m.ymin)) m.ymin = 0, m.ymax = 1;
    double pad = (m.ymax - m.ymin) * 0.05;
    if (pad == 0.0) pad = 0.5;
    m.ymin -= pad;
    m.ymax += pad;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << figure.width_px
        << "\" height=\"" << figure.height_px << "\" viewBox=\"0 0 " << figure.width_px << " "
        << figure.height_px << "\">\n";
    svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // frame and ticks
    svg << "  <rect x=\"" << fmt(m.vx) << "\" y=\"" << fmt(m.vy) << "\" width=\"" << fmt(m.vw)
        << "\" height=\"" << fmt(m.vh) << "\" fill=\"none\" stroke=\"#000\"/>\n";
    svg << "  <g font-family=\"sans-serif\" font-size=\"10\" fill=\"#333\">\n";
    for (double t : nice_ticks(m.xmin, m.xmax)) {
        double sx = m.mx(t);
        svg << "    <line x1=\"" << fmt(sx) << "\" y1=\"" << fmt(m.vy + m.vh) << "\" x2=\""
            << fmt(sx) << "\" y2=\"" << fmt(m.vy + m.vh + 4) << "\" stroke=\"#000\"/>\n";
        svg << "    <text x=\"" << fmt(sx) << "\" y=\"" << fmt(m.vy + m.vh + 16)
            << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    }
    for (double t : nice_ticks(m.ymin, m.ymax)) {
        double sy = m.my(t);
        svg << "    <line x1=\"" << fmt(m.vx - 4) << "\" y1=\"" << fmt(sy) << "\" x2=\""
            << fmt(m.vx) << "\" y2=\"" << fmt(sy) << "\" stroke=\"#000\"/>\n";
        svg << "    <text x=\"" << fmt(m.vx - 7) << "\" y=\"" << fmt(sy + 3.5)
            << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
    }
    svg << "  </g>\n";

    for (const Series& s : figure.series) {
        if (s.line && s.x.size() >= 2) {
            svg << "  <polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\""
                << fmt(s.width) << "\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) svg << " ";
                svg << fmt(m.mx(s.x[i])) << "," << fmt(m.my(s.y[i]));
            }
            svg << "\"/>\n";
        }
        if (s.marker != Marker::None) {
            svg << "  <g>\n";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                emit_marker(svg, s.marker, m.mx(s.x[i]), m.my(s.y[i]), s.color);
            svg << "  </g>\n";
        }
    }

    if (!figure.title.empty())
        svg << "  <text x=\"" << fmt(m.vx + m.vw / 2) << "\" y=\"20\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"13\" font-weight=\"bold\">"
            << xml_escape(figure.title) << "</text>\n";
    if (!figure.xlabel.empty())
        svg << "  <text x=\"" << fmt(m.vx + m.vw / 2) << "\" y=\""
            << fmt(m.vy + m.vh + 34) << "\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(figure.xlabel)
            << "</text>\n";
    if (!figure.ylabel.empty())
        svg << "  <text x=\"16\" y=\"" << fmt(m.vy + m.vh / 2)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" "
            << "transform=\"rotate(-90,16," << fmt(m.vy + m.vh / 2) << ")\">"
            << xml_escape(figure.ylabel) << "</text>\n";

    // legend, top-right inside the frame
    double ly = m.vy + 12;
    for (const Series& s : figure.series) {
        if (s.label.empty()) continue;
        double lx = m.vx + m.vw - 150;
        svg << "  <line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 18)
            << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        if (s.marker != Marker::None) emit_marker(svg, s.marker, lx + 9, ly, s.color);
        svg << "  <text x=\"" << fmt(lx + 24) << "\" y=\"" << fmt(ly + 3.5)
            << "\" font-family=\"sans-serif\" font-size=\"10\">" << xml_escape(s.label)
            << "</text>\n";
        ly += 14;
    }

    svg << "</svg>\n";
    return svg.str();
}

void write_svg(const Figure& figure, const std::string& path) {
    std::ofstream file(path);
    if (!file.is_open()) throw std::runtime_error("cannot write SVG file: " + path);
    file << render_svg(figure);
    if (!file.good()) throw std::runtime_error("failed while writing SVG file: " + path);
}

} // namespace csalloc::plot
