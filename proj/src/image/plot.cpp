#include "mdcrow/image/plot.hpp"

#include "mdcrow/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace mdcrow::image {

namespace {

std::string tick_label(double v) {
    if (std::abs(v) < 1e-12) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct Frame {
    int left, right, top, bottom;
    double xlo, xhi, ylo, yhi;
    double px(double x) const { return left + (x - xlo) / (xhi - xlo) * (right - left); }
    double py(double y) const { return bottom - (y - ylo) / (yhi - ylo) * (bottom - top); }
};

void pad_range(double& lo, double& hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        lo = 0;
        hi = 1;
    }
    if (hi - lo < 1e-12) {
        double m = std::max(std::abs(lo) * 0.05, 0.5);
        lo -= m;
        hi += m;
    }
}

void draw_axes(Image& img, const Frame& f, const std::vector<double>& xt, const std::vector<double>& yt,
               const std::string& title, const std::string& xl, const std::string& yl) {
    img.line(f.left, f.bottom, f.right, f.bottom, kBlack);
    img.line(f.left, f.bottom, f.left, f.top, kBlack);
    for (double t : yt) {
        double y = f.py(t);
        img.line(f.left + 1, y, f.right, y, {235, 235, 235});
        img.line(f.left - 4, y, f.left, y, kBlack);
        auto s = tick_label(t);
        img.text(f.left - 6 - Image::text_width(s), static_cast<int>(y) - 3, s, kBlack);
    }
    for (double t : xt) {
        double x = f.px(t);
        img.line(x, f.bottom, x, f.bottom + 4, kBlack);
        auto s = tick_label(t);
        img.text(static_cast<int>(x) - Image::text_width(s) / 2, f.bottom + 8, s, kBlack);
    }
    img.text((img.width() - Image::text_width(title, 2)) / 2, 10, title, kBlack, 2);
    img.text((f.left + f.right - Image::text_width(xl)) / 2, f.bottom + 24, xl, kBlack);
    img.text_vertical(8, (f.top + f.bottom + Image::text_width(yl)) / 2, yl, kBlack);
}

} // namespace

std::vector<double> nice_ticks(double lo, double hi, int target) {
    if (!(hi > lo)) return {lo};
    double raw = (hi - lo) / std::max(target, 1);
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + step * 1e-9; t += step) ticks.push_back(t);
    return ticks;
}

Image render_line_plot(const LinePlot& plot) {
    if (plot.lines.empty()) throw UsageError("nothing to plot");
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    for (const auto& l : plot.lines) {
        if (l.x.size() != l.y.size()) throw UsageError("series '" + l.name + "' has mismatched x and y lengths");
        for (std::size_t i = 0; i < l.x.size(); ++i) {
            if (!std::isfinite(l.x[i]) || !std::isfinite(l.y[i])) continue;
            xlo = std::min(xlo, l.x[i]);
            xhi = std::max(xhi, l.x[i]);
            ylo = std::min(ylo, l.y[i]);
            yhi = std::max(yhi, l.y[i]);
        }
    }
    pad_range(xlo, xhi);
    pad_range(ylo, yhi);
    double ypad = 0.05 * (yhi - ylo);
    ylo -= ypad;
    yhi += ypad;

    Image img(plot.width, plot.height);
    Frame f{70, plot.width - 20, 40, plot.height - 50, xlo, xhi, ylo, yhi};
    auto xt = nice_ticks(xlo, xhi);
    auto yt = nice_ticks(ylo, yhi);
    draw_axes(img, f, xt, yt, plot.title, plot.x_label, plot.y_label);

    for (std::size_t k = 0; k < plot.lines.size(); ++k) {
        const auto& l = plot.lines[k];
        auto c = palette(k);
        for (std::size_t i = 0; i + 1 < l.x.size(); ++i)
            img.line(f.px(l.x[i]), f.py(l.y[i]), f.px(l.x[i + 1]), f.py(l.y[i + 1]), c, 2);
        if (plot.markers || l.x.size() == 1)
            for (std::size_t i = 0; i < l.x.size(); ++i) img.disc(f.px(l.x[i]), f.py(l.y[i]), 3, c, c);
    }
    if (plot.lines.size() > 1 || !plot.lines[0].name.empty()) {
        int y = f.top + 4;
        for (std::size_t k = 0; k < plot.lines.size(); ++k) {
            const auto& name = plot.lines[k].name;
            int x = f.right - Image::text_width(name) - 24;
            img.fill_rect(x, y + 1, x + 12, y + 5, palette(k));
            img.text(x + 16, y, name, kBlack);
            y += 12;
        }
    }
    return img;
}

Image render_bar_chart(const BarChart& chart) {
    if (chart.categories.empty() || chart.groups.empty()) throw UsageError("nothing to plot");
    double yhi = 0, ylo = 0;
    for (const auto& g : chart.groups) {
        if (g.values.size() != chart.categories.size())
            throw UsageError("bar group '" + g.name + "' does not match the category count");
        for (double v : g.values) {
            if (!std::isfinite(v)) continue;
            yhi = std::max(yhi, v);
            ylo = std::min(ylo, v);
        }
    }
    pad_range(ylo, yhi);
    yhi += 0.08 * (yhi - ylo);

    Image img(chart.width, chart.height);
    Frame f{70, chart.width - 20, 40, chart.height - 50, 0, static_cast<double>(chart.categories.size()), ylo, yhi};
    draw_axes(img, f, {}, nice_ticks(ylo, yhi), chart.title, "", chart.y_label);

    double slot = (f.right - f.left) / static_cast<double>(chart.categories.size());
    double bar = slot * 0.8 / chart.groups.size();
    for (std::size_t c = 0; c < chart.categories.size(); ++c) {
        double x0 = f.left + c * slot + slot * 0.1;
        for (std::size_t g = 0; g < chart.groups.size(); ++g) {
            double v = chart.groups[g].values[c];
            if (!std::isfinite(v)) continue;
            int bx = static_cast<int>(x0 + g * bar);
            img.fill_rect(bx, static_cast<int>(f.py(v)), static_cast<int>(bx + bar) - 1, static_cast<int>(f.py(0)),
                          palette(g));
        }
        const auto& name = chart.categories[c];
        img.text(static_cast<int>(x0 + slot * 0.4) - Image::text_width(name) / 2, f.bottom + 8, name, kBlack);
    }
    if (chart.groups.size() > 1) {
        int y = f.top + 4;
        for (std::size_t g = 0; g < chart.groups.size(); ++g) {
            const auto& name = chart.groups[g].name;
            int x = f.right - Image::text_width(name) - 24;
            img.fill_rect(x, y + 1, x + 12, y + 5, palette(g));
            img.text(x + 16, y, name, kBlack);
            y += 12;
        }
    }
    return img;
}

} // namespace mdcrow::image
