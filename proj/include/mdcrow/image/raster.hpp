#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mdcrow::image {

using Color = std::array<std::uint8_t, 3>;

inline constexpr Color kWhite{255, 255, 255};
inline constexpr Color kBlack{0, 0, 0};
inline constexpr Color kGrey{200, 200, 200};

/// 8-bit RGB canvas with a few drawing primitives.
class Image {
public:
    Image(int width, int height, Color background = kWhite);

    int width() const { return width_; }
    int height() const { return height_; }
    Color at(int x, int y) const;

    void set(int x, int y, Color c);
    void fill_rect(int x0, int y0, int x1, int y1, Color c);
    void line(double x0, double y0, double x1, double y1, Color c, int thickness = 1);
    void disc(double cx, double cy, double r, Color fill, Color edge);

    // 5x7 glyphs scaled by `scale`; lowercase renders as uppercase.
    void text(int x, int y, std::string_view s, Color c, int scale = 1);
    void text_vertical(int x, int y, std::string_view s, Color c, int scale = 1);
    static int text_width(std::string_view s, int scale = 1) {
        return static_cast<int>(s.size()) * 6 * scale;
    }

    // Binary PPM (P6).
    std::string to_ppm() const;
    void save_ppm(const std::string& path) const;
    static Image from_ppm(std::string_view data);

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> rgb_;
};

Color palette(std::size_t i);

} // namespace mdcrow::image
