#include "font.hpp"

#include <cctype>
#include <map>

namespace mdcrow::image::detail {

namespace {

constexpr std::uint8_t b(const char* row) {
    std::uint8_t v = 0;
    for (int i = 0; i < 5; ++i) v = static_cast<std::uint8_t>((v << 1) | (row[i] == '1' ? 1 : 0));
    return v;
}

#define G(r0, r1, r2, r3, r4, r5, r6) Glyph{b(r0), b(r1), b(r2), b(r3), b(r4), b(r5), b(r6)}

const std::map<char, Glyph>& table() {
    static const std::map<char, Glyph> t{
        {' ', G("00000", "00000", "00000", "00000", "00000", "00000", "00000")},
        {'0', G("01110", "10001", "10011", "10101", "11001", "10001", "01110")},
        {'1', G("00100", "01100", "00100", "00100", "00100", "00100", "01110")},
        {'2', G("01110", "10001", "00001", "00010", "00100", "01000", "11111")},
        {'3', G("11110", "00001", "00001", "01110", "00001", "00001", "11110")},
        {'4', G("00010", "00110", "01010", "10010", "11111", "00010", "00010")},
        {'5', G("11111", "10000", "11110", "00001", "00001", "10001", "01110")},
        {'6', G("00110", "01000", "10000", "11110", "10001", "10001", "01110")},
        {'7', G("11111", "00001", "00010", "00100", "01000", "01000", "01000")},
        {'8', G("01110", "10001", "10001", "01110", "10001", "10001", "01110")},
        {'9', G("01110", "10001", "10001", "01111", "00001", "00010", "01100")},
        {'A', G("01110", "10001", "10001", "11111", "10001", "10001", "10001")},
        {'B', G("11110", "10001", "10001", "11110", "10001", "10001", "11110")},
        {'C', G("01110", "10001", "10000", "10000", "10000", "10001", "01110")},
        {'D', G("11100", "10010", "10001", "10001", "10001", "10010", "11100")},
        {'E', G("11111", "10000", "10000", "11110", "10000", "10000", "11111")},
        {'F', G("11111", "10000", "10000", "11110", "10000", "10000", "10000")},
        {'G', G("01110", "10001", "10000", "10111", "10001", "10001", "01111")},
        {'H', G("10001", "10001", "10001", "11111", "10001", "10001", "10001")},
        {'I', G("01110", "00100", "00100", "00100", "00100", "00100", "01110")},
        {'J', G("00111", "00010", "00010", "00010", "00010", "10010", "01100")},
        {'K', G("10001", "10010", "10100", "11000", "10100", "10010", "10001")},
        {'L', G("10000", "10000", "10000", "10000", "10000", "10000", "11111")},
        {'M', G("10001", "11011", "10101", "10101", "10001", "10001", "10001")},
        {'N', G("10001", "10001", "11001", "10101", "10011", "10001", "10001")},
        {'O', G("01110", "10001", "10001", "10001", "10001", "10001", "01110")},
        {'P', G("11110", "10001", "10001", "11110", "10000", "10000", "10000")},
        {'Q', G("01110", "10001", "10001", "10001", "10101", "10010", "01101")},
        {'R', G("11110", "10001", "10001", "11110", "10100", "10010", "10001")},
        {'S', G("01111", "10000", "10000", "01110", "00001", "00001", "11110")},
        {'T', G("11111", "00100", "00100", "00100", "00100", "00100", "00100")},
        {'U', G("10001", "10001", "10001", "10001", "10001", "10001", "01110")},
        {'V', G("10001", "10001", "10001", "10001", "10001", "01010", "00100")},
        {'W', G("10001", "10001", "10001", "10101", "10101", "10101", "01010")},
        {'X', G("10001", "10001", "01010", "00100", "01010", "10001", "10001")},
        {'Y', G("10001", "10001", "10001", "01010", "00100", "00100", "00100")},
        {'Z', G("11111", "00001", "00010", "00100", "01000", "10000", "11111")},
        {'.', G("00000", "00000", "00000", "00000", "00000", "01100", "01100")},
        {',', G("00000", "00000", "00000", "00000", "01100", "00100", "01000")},
        {'-', G("00000", "00000", "00000", "11111", "00000", "00000", "00000")},
        {'+', G("00000", "00100", "00100", "11111", "00100", "00100", "00000")},
        {':', G("00000", "01100", "01100", "00000", "01100", "01100", "00000")},
        {'(', G("00010", "00100", "01000", "01000", "01000", "00100", "00010")},
        {')', G("01000", "00100", "00010", "00010", "00010", "00100", "01000")},
        {'/', G("00000", "00001", "00010", "00100", "01000", "10000", "00000")},
        {'%', G("11000", "11001", "00010", "00100", "01000", "10011", "00011")},
        {'_', G("00000", "00000", "00000", "00000", "00000", "00000", "11111")},
        {'=', G("00000", "00000", "11111", "00000", "11111", "00000", "00000")},
        {'[', G("01110", "01000", "01000", "01000", "01000", "01000", "01110")},
        {']', G("01110", "00010", "00010", "00010", "00010", "00010", "01110")},
        {'*', G("00000", "00100", "10101", "01110", "10101", "00100", "00000")},
        {'^', G("00100", "01010", "10001", "00000", "00000", "00000", "00000")},
        {'\'', G("00100", "00100", "01000", "00000", "00000", "00000", "00000")},
        {'#', G("01010", "01010", "11111", "01010", "11111", "01010", "01010")},
        {'<', G("00010", "00100", "01000", "10000", "01000", "00100", "00010")},
        {'>', G("01000", "00100", "00010", "00001", "00010", "00100", "01000")},
        {'?', G("01110", "10001", "00001", "00010", "00100", "00000", "00100")},
        {'!', G("00100", "00100", "00100", "00100", "00100", "00000", "00100")},
    };
    return t;
}

#undef G

const Glyph kUnknown{b("11111"), b("10001"), b("10001"), b("10001"), b("10001"), b("10001"), b("11111")};

} // namespace

const Glyph& glyph(char c) {
    const auto& t = table();
    auto it = t.find(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    return it == t.end() ? kUnknown : it->second;
}

} // namespace mdcrow::image::detail
