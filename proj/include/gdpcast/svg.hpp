#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gdpcast/csv.hpp"
#include "gdpcast/errors.hpp"

namespace gdpcast::svg {

using Point = std::pair<double, double>;

namespace detail {
inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}
} // namespace detail

/**
 * Minimal static line/stem/band chart writer. The root element carries the
 * data-to-screen affine map as data-* attributes (sx = ax*x + bx,
 * sy = ay*y + by), so tests can invert plotted coordinates exactly; point
 * coordinates are printed with full %.17g precision for the same reason.
 */
class Plot {
public:
    Plot(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_line(const std::string& cls, const std::string& color,
                  std::vector<Point> pts, double width = 1.5, bool dashed = false) {
        note_range(pts);
        lines_.push_back({cls, color, std::move(pts), width, dashed});
    }

    /// Interval ribbon: one polygon vertex per bound, lower edge left-to-right
    /// then upper edge right-to-left (2n vertices for n points).
    void add_band(const std::string& cls, const std::string& color, const std::vector<double>& x,
                  const std::vector<double>& lower, const std::vector<double>& upper) {
        if (x.size() != lower.size() || x.size() != upper.size() || x.empty())
            throw InputError("svg: band inputs must be equal-length and non-empty");
        std::vector<Point> verts;
        verts.reserve(2 * x.size());
        for (std::size_t i = 0; i < x.size(); ++i) verts.emplace_back(x[i], lower[i]);
        for (std::size_t i = x.size(); i-- > 0;) verts.emplace_back(x[i], upper[i]);
        note_range(verts);
        bands_.push_back({cls, color, std::move(verts)});
    }

    /// Vertical stems from y=0 with a dot at the tip (correlogram style).
    void add_stems(const std::string& cls, const std::string& color, std::vector<Point> pts) {
        note_range(pts);
        note_y(0.0);
        stems_.push_back({cls, color, std::move(pts)});
    }

    void add_hline(const std::string& cls, const std::string& color, double y) {
        note_y(y);
        hlines_.push_back({cls, color, y});
    }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw InputError("svg: cannot write '" + path + "'");
        write(out);
    }

    void write(std::ostream& out) const {
        if (!std::isfinite(xmin_))
            throw InputError("svg: nothing to plot");
        double x0 = xmin_, x1 = xmax_, y0 = ymin_, y1 = ymax_;
        if (x1 <= x0) { x0 -= 0.5; x1 += 0.5; }
        if (y1 <= y0) { y0 -= 0.5; y1 += 0.5; }
        const double xpad = 0.04 * (x1 - x0), ypad = 0.06 * (y1 - y0);
        x0 -= xpad; x1 += xpad; y0 -= ypad; y1 += ypad;
        const double ax = (kW - kL - kR) / (x1 - x0);
        const double bx = kL - ax * x0;
        const double ay = -(kH - kT - kB) / (y1 - y0);
        const double by = (kH - kB) - ay * y0;
        const auto fd = csv::format_double;
        const auto X = [&](double x) { return fd(ax * x + bx); };
        const auto Y = [&](double y) { return fd(ay * y + by); };

        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
            << "\" viewBox=\"0 0 " << kW << " " << kH << "\" data-ax=\"" << fd(ax)
            << "\" data-bx=\"" << fd(bx) << "\" data-ay=\"" << fd(ay) << "\" data-by=\"" << fd(by)
            << "\">\n";
        out << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH
            << "\" fill=\"white\"/>\n";
        out << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\" "
               "font-family=\"sans-serif\">"
            << detail::xml_escape(title_) << "</text>\n";

        // axes frame and ticks
        out << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR
            << "\" height=\"" << kH - kT - kB
            << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
        for (int i = 0; i <= 5; ++i) {
            const double fx = x0 + (x1 - x0) * i / 5.0;
            const double fy = y0 + (y1 - y0) * i / 5.0;
            out << "<line x1=\"" << X(fx) << "\" y1=\"" << kH - kB << "\" x2=\"" << X(fx)
                << "\" y2=\"" << kH - kB + 5 << "\" stroke=\"#444444\"/>\n";
            out << "<text x=\"" << X(fx) << "\" y=\"" << kH - kB + 18
                << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
                << format_tick(fx) << "</text>\n";
            out << "<line x1=\"" << kL - 5 << "\" y1=\"" << Y(fy) << "\" x2=\"" << kL
                << "\" y2=\"" << Y(fy) << "\" stroke=\"#444444\"/>\n";
            out << "<text x=\"" << kL - 8 << "\" y=\"" << Y(fy)
                << "\" text-anchor=\"end\" dominant-baseline=\"middle\" font-size=\"11\" "
                   "font-family=\"sans-serif\">"
                << format_tick(fy) << "</text>\n";
        }
        out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 8
            << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
            << detail::xml_escape(x_label_) << "</text>\n";
        out << "<text x=\"16\" y=\"" << kH / 2
            << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" "
               "transform=\"rotate(-90 16 "
            << kH / 2 << ")\">" << detail::xml_escape(y_label_) << "</text>\n";

        for (const auto& b : bands_) {
            out << "<polygon class=\"" << b.cls << "\" fill=\"" << b.color
                << "\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
            for (std::size_t i = 0; i < b.verts.size(); ++i)
                out << (i ? " " : "") << X(b.verts[i].first) << ',' << Y(b.verts[i].second);
            out << "\"/>\n";
        }
        for (const auto& h : hlines_) {
            out << "<line class=\"" << h.cls << "\" x1=\"" << kL << "\" y1=\"" << Y(h.y)
                << "\" x2=\"" << kW - kR << "\" y2=\"" << Y(h.y) << "\" stroke=\"" << h.color
                << "\" stroke-dasharray=\"4 3\"/>\n";
        }
        for (const auto& s : stems_) {
            out << "<g class=\"" << s.cls << "\" stroke=\"" << s.color << "\" fill=\"" << s.color
                << "\">\n";
            for (const auto& [x, y] : s.pts) {
                out << "  <line x1=\"" << X(x) << "\" y1=\"" << Y(0.0) << "\" x2=\"" << X(x)
                    << "\" y2=\"" << Y(y) << "\"/>\n";
                out << "  <circle cx=\"" << X(x) << "\" cy=\"" << Y(y) << "\" r=\"2.5\"/>\n";
            }
            out << "</g>\n";
        }
        for (const auto& l : lines_) {
            out << "<polyline class=\"" << l.cls << "\" fill=\"none\" stroke=\"" << l.color
                << "\" stroke-width=\"" << l.width << "\"";
            if (l.dashed) out << " stroke-dasharray=\"5 4\"";
            out << " points=\"";
            for (std::size_t i = 0; i < l.pts.size(); ++i)
                out << (i ? " " : "") << X(l.pts[i].first) << ',' << Y(l.pts[i].second);
            out << "\"/>\n";
        }
        out << "</svg>\n";
    }

private:
    static constexpr int kW = 860, kH = 520, kL = 70, kR = 20, kT = 40, kB = 50;

    struct Line {
        std::string cls, color;
        std::vector<Point> pts;
        double width;
        bool dashed;
    };
    struct Band {
        std::string cls, color;
        std::vector<Point> verts;
    };
    struct Stems {
        std::string cls, color;
        std::vector<Point> pts;
    };
    struct HLine {
        std::string cls, color;
        double y;
    };

    static std::string format_tick(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return buf;
    }

    void note_range(const std::vector<Point>& pts) {
        for (const auto& [x, y] : pts) {
            xmin_ = std::min(xmin_, x);
            xmax_ = std::max(xmax_, x);
            note_y(y);
        }
    }
    void note_y(double y) {
        ymin_ = std::min(ymin_, y);
        ymax_ = std::max(ymax_, y);
    }

    std::string title_, x_label_, y_label_;
    std::vector<Line> lines_;
    std::vector<Band> bands_;
    std::vector<Stems> stems_;
    std::vector<HLine> hlines_;
    double xmin_ = std::numeric_limits<double>::infinity();
    double xmax_ = -std::numeric_limits<double>::infinity();
    double ymin_ = std::numeric_limits<double>::infinity();
    double ymax_ = -std::numeric_limits<double>::infinity();
};

} // namespace gdpcast::svg
