#pragma once

#include <string>
#include <vector>

namespace sketchvar::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> yerr;  // half-widths; empty for no error bars
    std::string color = "#1f6fb4";
};

/// Minimal line chart: axes with ticks, one polyline per series, vertical
/// error bars, legend. The y axis switches to log10 automatically when all
/// values are positive and span more than two decades.
class LineChart {
public:
    LineChart(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_series(Series s) { series_.push_back(std::move(s)); }
    std::string render() const;

private:
    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
};

}  // namespace sketchvar::svg
