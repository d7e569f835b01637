#include "mdcrow/image/raster.hpp"

#include "font.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace mdcrow::image {

Image::Image(int width, int height, Color background) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw UsageError("image dimensions must be positive");
    rgb_.resize(static_cast<std::size_t>(width) * height * 3);
    for (std::size_t i = 0; i < rgb_.size(); i += 3) {
        rgb_[i] = background[0];
        rgb_[i + 1] = background[1];
        rgb_[i + 2] = background[2];
    }
}

Color Image::at(int x, int y) const {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) throw UsageError("pixel out of range");
    auto i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    return {rgb_[i], rgb_[i + 1], rgb_[i + 2]};
}

void Image::set(int x, int y, Color c) {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
    auto i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    rgb_[i] = c[0];
    rgb_[i + 1] = c[1];
    rgb_[i + 2] = c[2];
}

void Image::fill_rect(int x0, int y0, int x1, int y1, Color c) {
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, width_ - 1);
    y1 = std::min(y1, height_ - 1);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) set(x, y, c);
}

void Image::line(double x0, double y0, double x1, double y1, Color c, int thickness) {
    if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(x1) || !std::isfinite(y1)) return;
    double len = std::max(std::abs(x1 - x0), std::abs(y1 - y0));
    int n = std::max(1, static_cast<int>(std::ceil(len)));
    int half = thickness / 2;
    for (int k = 0; k <= n; ++k) {
        double t = static_cast<double>(k) / n;
        int x = static_cast<int>(std::lround(x0 + t * (x1 - x0)));
        int y = static_cast<int>(std::lround(y0 + t * (y1 - y0)));
        for (int dy = -half; dy <= thickness - 1 - half; ++dy)
            for (int dx = -half; dx <= thickness - 1 - half; ++dx) set(x + dx, y + dy, c);
    }
}

void Image::disc(double cx, double cy, double r, Color fill, Color edge) {
    int x0 = static_cast<int>(std::floor(cx - r)), x1 = static_cast<int>(std::ceil(cx + r));
    int y0 = static_cast<int>(std::floor(cy - r)), y1 = static_cast<int>(std::ceil(cy + r));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            double d = std::hypot(x - cx, y - cy);
            if (d > r) continue;
            if (d > r - 1.0) {
                set(x, y, edge);
            } else {
                // cheap shading: lighter toward the upper left
                double s = 1.0 - 0.35 * std::clamp((x - cx + y - cy) / (2 * r) + 0.5, 0.0, 1.0);
                Color c{};
                for (int k = 0; k < 3; ++k) c[k] = static_cast<std::uint8_t>(std::clamp(fill[k] * (s + 0.2), 0.0, 255.0));
                set(x, y, c);
            }
        }
}

void Image::text(int x, int y, std::string_view s, Color c, int scale) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& g = detail::glyph(s[i]);
        int ox = x + static_cast<int>(i) * 6 * scale;
        for (int row = 0; row < 7; ++row)
            for (int col = 0; col < 5; ++col)
                if (g[row] & (1 << (4 - col)))
                    fill_rect(ox + col * scale, y + row * scale, ox + col * scale + scale - 1,
                              y + row * scale + scale - 1, c);
    }
}

void Image::text_vertical(int x, int y, std::string_view s, Color c, int scale) {
    // reads bottom to top; (x, y) is the bottom-left corner
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& g = detail::glyph(s[i]);
        int oy = y - static_cast<int>(i) * 6 * scale;
        for (int row = 0; row < 7; ++row)
            for (int col = 0; col < 5; ++col)
                if (g[row] & (1 << (4 - col)))
                    fill_rect(x + row * scale, oy - col * scale - scale + 1, x + row * scale + scale - 1,
                              oy - col * scale, c);
    }
}

std::string Image::to_ppm() const {
    std::string out = "P6\n" + std::to_string(width_) + " " + std::to_string(height_) + "\n255\n";
    out.append(reinterpret_cast<const char*>(rgb_.data()), rgb_.size());
    return out;
}

void Image::save_ppm(const std::string& path) const { write_file(path, to_ppm()); }

Image Image::from_ppm(std::string_view data) {
    std::size_t pos = 0;
    auto token = [&]() {
        while (pos < data.size()) {
            if (data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
        std::size_t start = pos;
        while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
        return std::string(data.substr(start, pos - start));
    };
    if (token() != "P6") throw ParseError("not a binary PPM image");
    int w = static_cast<int>(parse_int(token(), "PPM width"));
    int h = static_cast<int>(parse_int(token(), "PPM height"));
    int maxval = static_cast<int>(parse_int(token(), "PPM maxval"));
    if (maxval != 255) throw ParseError("unsupported PPM maxval");
    ++pos;  // single whitespace after header
    std::size_t need = static_cast<std::size_t>(w) * h * 3;
    if (data.size() < pos + need) throw ParseError("truncated PPM image");
    Image img(w, h);
    std::copy(data.begin() + pos, data.begin() + pos + need, img.rgb_.begin());
    return img;
}

Color palette(std::size_t i) {
    static const Color colors[] = {
        {31, 119, 180}, {255, 127, 14}, {44, 160, 44},  {214, 39, 40},
        {148, 103, 189}, {140, 86, 75}, {227, 119, 194}, {127, 127, 127},
    };
    return colors[i % 8];
}

} // namespace mdcrow::image
