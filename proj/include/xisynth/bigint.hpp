#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace xisynth {

using BigInt = boost::multiprecision::cpp_int;

/// Valuations are non-negative integers or +infinity (the valuation of zero).
using Valuation = int;
inline constexpr Valuation kInfiniteValuation = std::numeric_limits<int>::max();

inline bool is_even(const BigInt& x) { return !boost::multiprecision::bit_test(x, 0); }

/// Floor division for signed big integers (cpp_int division truncates toward zero).
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline BigInt floor_mod(const BigInt& a, const BigInt& b) { return a - floor_div(a, b) * b; }

inline bool fits_int64(const BigInt& x) {
    return x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max();
}

/// Minimal big-endian two's-complement encoding, prefixed by a length byte
/// (or 0xFF plus a 4-byte length for long values). Zero encodes as a single 0 byte.
inline void append_twos_complement(std::string& out, const BigInt& x) {
    std::vector<unsigned char> bytes;
    if (x != 0) {
        BigInt v = x;
        bool negative = v < 0;
        if (negative) v = -v - 1;  // bytes of ~x
        while (v != 0) {
            auto byte = static_cast<unsigned char>(static_cast<unsigned>(v & 0xFF));
            bytes.push_back(negative ? static_cast<unsigned char>(~byte) : byte);
            v >>= 8;
        }
        unsigned char sign_fill = negative ? 0xFF : 0x00;
        if (bytes.empty() || ((bytes.back() & 0x80) != 0) != negative) bytes.push_back(sign_fill);
    }
    if (bytes.size() < 0xFF) {
        out.push_back(static_cast<char>(bytes.size()));
    } else {
        out.push_back(static_cast<char>(0xFF));
        auto n = static_cast<std::uint32_t>(bytes.size());
        for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((n >> s) & 0xFF));
    }
    for (auto it = bytes.rbegin(); it != bytes.rend(); ++it) out.push_back(static_cast<char>(*it));
}

}  // namespace xisynth
