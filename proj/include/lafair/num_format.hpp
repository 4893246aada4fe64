// Locale-free numeric text: shortest representation that round-trips exactly,
// so serialized outputs are byte-stable across runs and platforms.
#pragma once

#include <array>
#include <charconv>
#include <string>

namespace lafair {

inline std::string format_double(double v) {
    std::array<char, 32> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

} // namespace lafair
