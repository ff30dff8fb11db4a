#pragma once

#include <string>
#include <vector>

namespace cflex::svg {

struct Point {
    double x = 0.0;
    double y = 0.0;
    std::string label;  // optional hover text
};

struct ScatterSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Point> points;
    bool fit_line = true;  // least-squares line over the points
};

std::string scatter(const ScatterSpec& plot);

struct StackedBar {
    std::string label;
    double noun = 0.0;  // proportions, summing to 1
    double verb = 0.0;
    double other = 0.0;
};

struct StackedPanel {
    std::string title;
    std::vector<StackedBar> bars;
};

/// Horizontal 100% stacked bars, one panel per language.
std::string stacked_bars(const std::string& title, const std::vector<StackedPanel>& panels);

std::string escape(const std::string& text);

}  // namespace cflex::svg
