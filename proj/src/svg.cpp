#include "sketchvar/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace sketchvar::svg {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 690, kTop = 50, kBottom = 420;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const char* kPalette[] = {"#1f6fb4", "#d1495b", "#3f8f4a", "#8a5fbf", "#c88a2d", "#3aa6a6"};

}  // namespace

std::string LineChart::render() const {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    bool positive = true;
    for (const auto& s : series_) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double lo = s.y[i] - (i < s.yerr.size() ? s.yerr[i] : 0.0);
            const double hi = s.y[i] + (i < s.yerr.size() ? s.yerr[i] : 0.0);
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, lo);
            ymax = std::max(ymax, hi);
            if (lo <= 0.0) positive = false;
        }
    }
    if (!std::isfinite(xmin)) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
    if (xmin == xmax) { xmin -= 0.5; xmax += 0.5; }
    if (ymin == ymax) { ymin -= 0.5; ymax += 0.5; }

    const bool logy = positive && ymin > 0.0 && ymax / ymin > 100.0;
    auto ty = [&](double v) { return logy ? std::log10(v) : v; };
    const double py_min = ty(ymin), py_max = ty(ymax);

    auto sx = [&](double v) { return kLeft + (v - xmin) / (xmax - xmin) * (kRight - kLeft); };
    auto sy = [&](double v) {
        return kBottom - (ty(v) - py_min) / (py_max - py_min) * (kBottom - kTop);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
       << title_ << "</text>\n";

    // axes
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
       << kBottom << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
       << kBottom << "\" stroke=\"black\"/>\n";

    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / ticks;
        os << "<line x1=\"" << sx(fx) << "\" y1=\"" << kBottom << "\" x2=\"" << sx(fx)
           << "\" y2=\"" << kBottom + 5 << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << sx(fx) << "\" y=\"" << kBottom + 20
           << "\" text-anchor=\"middle\" font-size=\"11\">" << num(fx) << "</text>\n";
        const double py = py_min + (py_max - py_min) * i / ticks;
        const double fy = logy ? std::pow(10.0, py) : py;
        const double yy = kBottom - (py - py_min) / (py_max - py_min) * (kBottom - kTop);
        os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << yy << "\" x2=\"" << kLeft << "\" y2=\""
           << yy << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << kLeft - 8 << "\" y=\"" << yy + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << num(fy) << "</text>\n";
    }
    os << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kHeight - 14
       << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label_ << "</text>\n"
       << "<text x=\"20\" y=\"" << (kTop + kBottom) / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 "
       << (kTop + kBottom) / 2 << ")\">" << y_label_ << (logy ? " (log scale)" : "")
       << "</text>\n";

    std::size_t color_idx = 0;
    double legend_y = kTop + 6;
    for (const auto& s : series_) {
        const std::string color = s.color.empty() ? kPalette[color_idx % 6] : s.color;
        ++color_idx;
        std::ostringstream pts;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            pts << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\""
           << pts.str() << "\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            os << "<circle cx=\"" << sx(s.x[i]) << "\" cy=\"" << sy(s.y[i])
               << "\" r=\"2.6\" fill=\"" << color << "\"/>\n";
            if (i < s.yerr.size() && s.yerr[i] > 0.0) {
                double lo = s.y[i] - s.yerr[i], hi = s.y[i] + s.yerr[i];
                if (logy) lo = std::max(lo, ymin);
                os << "<line x1=\"" << sx(s.x[i]) << "\" y1=\"" << sy(lo) << "\" x2=\""
                   << sx(s.x[i]) << "\" y2=\"" << sy(hi) << "\" stroke=\"" << color
                   << "\" stroke-width=\"1\"/>\n"
                   << "<line x1=\"" << sx(s.x[i]) - 3 << "\" y1=\"" << sy(lo) << "\" x2=\""
                   << sx(s.x[i]) + 3 << "\" y2=\"" << sy(lo) << "\" stroke=\"" << color
                   << "\" stroke-width=\"1\"/>\n"
                   << "<line x1=\"" << sx(s.x[i]) - 3 << "\" y1=\"" << sy(hi) << "\" x2=\""
                   << sx(s.x[i]) + 3 << "\" y2=\"" << sy(hi) << "\" stroke=\"" << color
                   << "\" stroke-width=\"1\"/>\n";
            }
        }
        os << "<rect x=\"" << kRight - 150 << "\" y=\"" << legend_y - 9
           << "\" width=\"12\" height=\"3\" fill=\"" << color << "\"/>\n"
           << "<text x=\"" << kRight - 132 << "\" y=\"" << legend_y
           << "\" font-size=\"12\">" << s.label << "</text>\n";
        legend_y += 16;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace sketchvar::svg
