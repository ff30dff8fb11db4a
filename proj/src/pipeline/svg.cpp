#include "cflex/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace cflex::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

// Fixed two-decimal coordinates keep the markup byte-stable across platforms.
std::string num(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    std::string s(buf, r.ptr);
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string tick_label(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 3);
    return std::string(buf, r.ptr);
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range padded_range(double lo, double hi) {
    if (!(hi > lo)) {
        const double pad = std::abs(lo) > 0.0 ? std::abs(lo) * 0.1 : 1.0;
        return {lo - pad, hi + pad};
    }
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

void header(std::ostringstream& out, const std::string& title, double width, double height) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\" font-family=\"sans-serif\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << escape(title) << "</text>\n";
}

}  // namespace

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string scatter(const ScatterSpec& plot) {
    double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
    if (!plot.points.empty()) {
        xlo = xhi = plot.points.front().x;
        ylo = yhi = plot.points.front().y;
        for (const auto& p : plot.points) {
            xlo = std::min(xlo, p.x);
            xhi = std::max(xhi, p.x);
            ylo = std::min(ylo, p.y);
            yhi = std::max(yhi, p.y);
        }
    }
    const Range xr = padded_range(xlo, xhi);
    const Range yr = padded_range(ylo, yhi);
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto sy = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::ostringstream out;
    header(out, plot.title, kWidth, kHeight);
    out << "<g stroke=\"black\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(kLeft + pw)
        << "\" y2=\"" << num(kTop + ph) << "\"/>\n";
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft) << "\" y2=\""
        << num(kTop + ph) << "\"/>\n";
    out << "</g>\n<g font-size=\"11\">\n";
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double xv = xr.lo + (xr.hi - xr.lo) * i / kTicks;
        const double yv = yr.lo + (yr.hi - yr.lo) * i / kTicks;
        out << "<line x1=\"" << num(sx(xv)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(sx(xv))
            << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(kTop + ph + 18)
            << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
        out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(sy(yv)) << "\" x2=\"" << num(kLeft)
            << "\" y2=\"" << num(sy(yv)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(sy(yv) + 4) << "\" text-anchor=\"end\">"
            << tick_label(yv) << "</text>\n";
    }
    out << "</g>\n";
    out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15)
        << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(plot.x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << num(kTop + ph / 2) << ")\">" << escape(plot.y_label) << "</text>\n";

    out << "<g fill=\"steelblue\" fill-opacity=\"0.6\">\n";
    for (const auto& p : plot.points) {
        out << "<circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y)) << "\" r=\"3\">";
        if (!p.label.empty()) out << "<title>" << escape(p.label) << "</title>";
        out << "</circle>\n";
    }
    out << "</g>\n";

    if (plot.fit_line && plot.points.size() >= 2) {
        double mx = 0, my = 0;
        for (const auto& p : plot.points) {
            mx += p.x;
            my += p.y;
        }
        const double n = static_cast<double>(plot.points.size());
        mx /= n;
        my /= n;
        double sxx = 0, sxy = 0;
        for (const auto& p : plot.points) {
            sxx += (p.x - mx) * (p.x - mx);
            sxy += (p.x - mx) * (p.y - my);
        }
        if (sxx > 0) {
            const double slope = sxy / sxx;
            const double y0 = my + slope * (xlo - mx);
            const double y1 = my + slope * (xhi - mx);
            out << "<line x1=\"" << num(sx(xlo)) << "\" y1=\"" << num(sy(y0)) << "\" x2=\"" << num(sx(xhi))
                << "\" y2=\"" << num(sy(y1)) << "\" stroke=\"firebrick\" stroke-width=\"2\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

std::string stacked_bars(const std::string& title, const std::vector<StackedPanel>& panels) {
    constexpr double kBarHeight = 18.0;
    constexpr double kGap = 6.0;
    constexpr double kLabelWidth = 140.0;
    constexpr double kPanelWidth = 320.0;
    constexpr double kPanelGap = 40.0;
    std::size_t rows = 0;
    for (const auto& p : panels) rows = std::max(rows, p.bars.size());
    const double width = 20.0 + static_cast<double>(panels.size()) * (kLabelWidth + kPanelWidth + kPanelGap);
    const double height = 70.0 + static_cast<double>(rows) * (kBarHeight + kGap) + 40.0;

    static constexpr const char* kColors[3] = {"#4c72b0", "#dd8452", "#b0b0b0"};
    static constexpr const char* kNames[3] = {"noun", "verb", "other"};

    std::ostringstream out;
    header(out, title, width, height);
    for (std::size_t pi = 0; pi < panels.size(); ++pi) {
        const auto& panel = panels[pi];
        const double x0 = 20.0 + static_cast<double>(pi) * (kLabelWidth + kPanelWidth + kPanelGap);
        out << "<text x=\"" << num(x0 + kLabelWidth + kPanelWidth / 2) << "\" y=\"52\" text-anchor=\"middle\" "
            << "font-size=\"13\">" << escape(panel.title) << "</text>\n";
        for (std::size_t bi = 0; bi < panel.bars.size(); ++bi) {
            const auto& bar = panel.bars[bi];
            const double y = 64.0 + static_cast<double>(bi) * (kBarHeight + kGap);
            out << "<text x=\"" << num(x0 + kLabelWidth - 6) << "\" y=\"" << num(y + kBarHeight - 5)
                << "\" text-anchor=\"end\" font-size=\"11\">" << escape(bar.label) << "</text>\n";
            const double parts[3] = {bar.noun, bar.verb, bar.other};
            double x = x0 + kLabelWidth;
            for (int k = 0; k < 3; ++k) {
                const double w = std::clamp(parts[k], 0.0, 1.0) * kPanelWidth;
                out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
                    << "\" height=\"" << num(kBarHeight) << "\" fill=\"" << kColors[k] << "\"><title>"
                    << kNames[k] << ' ' << num(parts[k]) << "</title></rect>\n";
                x += w;
            }
        }
    }
    const double ly = height - 24.0;
    for (int k = 0; k < 3; ++k) {
        const double lx = 20.0 + k * 90.0;
        out << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly) << "\" width=\"12\" height=\"12\" fill=\""
            << kColors[k] << "\"/>\n";
        out << "<text x=\"" << num(lx + 16) << "\" y=\"" << num(ly + 10) << "\" font-size=\"11\">" << kNames[k]
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace cflex::svg
