#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <string>

#include "xisynth/bigint.hpp"
#include "xisynth/error.hpp"

namespace xisynth {

/// Arithmetic modulo 2^bits on machine words. Requires bits <= 62 so that
/// one extra bit survives the shift used by exact halving.
struct WordArith {
    using Word = std::uint64_t;
    int bits;
    Word mask;

    explicit WordArith(int b) : bits(b), mask((Word{1} << b) - 1) {
        require(b >= 1 && b <= 62, ErrorCode::kInvariant, "word modulus out of range");
    }

    static bool fits(int b) { return b >= 1 && b <= 62; }

    Word reduce(Word x) const { return x & mask; }
    Word add(Word x, Word y) const { return (x + y) & mask; }
    Word sub(Word x, Word y) const { return (x - y) & mask; }
    Word mul(Word x, Word y) const { return (x * y) & mask; }
    Word from_int(std::int64_t x) const { return static_cast<Word>(x) & mask; }
    Word from_big(const BigInt& x) const { return static_cast<Word>(BigInt(x & BigInt(mask))); }
    Word from_value(std::int64_t x) const { return from_int(x); }
    Word from_value(const BigInt& x) const { return from_big(x); }
    /// Representative modulo the machine word, for exact low-bit products.
    static Word raw_int(std::int64_t x) { return static_cast<Word>(x); }
    static Word raw_from_big(const BigInt& x) {
        return static_cast<Word>(BigInt(x & BigInt(std::numeric_limits<Word>::max())));
    }
    BigInt to_big(Word x) const { return BigInt(x); }
    static bool is_zero(Word x) { return x == 0; }
    static bool is_odd(Word x) { return (x & 1) != 0; }
    /// Number of trailing zero bits; bits for zero.
    int twos(Word x) const { return x == 0 ? bits : std::countr_zero(x); }
    /// Exact x / 2^s of the representative in [0, 2^bits).
    static Word shr(Word x, int s) { return s >= 64 ? 0 : x >> s; }
    /// (x * y) / 2 where the full product is known to be even; result mod 2^bits.
    Word mul_half(Word x, Word y) const { return ((x * y) >> 1) & mask; }
    Word pow2(int e) const { return e >= bits ? 0 : (Word{1} << e); }
    /// Same bytes as append_twos_complement on the non-negative value x.
    static void append_bytes(std::string& out, Word x) {
        unsigned char buf[9];
        int n = 0;
        while (x != 0) {
            buf[n++] = static_cast<unsigned char>(x & 0xFF);
            x >>= 8;
        }
        if (n > 0 && (buf[n - 1] & 0x80) != 0) buf[n++] = 0;
        out.push_back(static_cast<char>(n));
        while (n > 0) out.push_back(static_cast<char>(buf[--n]));
    }
};

/// Same interface on arbitrary-precision integers for moduli beyond a word.
struct BigArith {
    using Word = BigInt;
    int bits;
    BigInt mask;

    explicit BigArith(int b) : bits(b), mask((BigInt(1) << b) - 1) {}

    Word reduce(const Word& x) const { return x & mask; }
    Word add(const Word& x, const Word& y) const { return (x + y) & mask; }
    Word sub(const Word& x, const Word& y) const { return (x - y) & mask; }
    Word mul(const Word& x, const Word& y) const { return (x * y) & mask; }
    Word from_int(std::int64_t x) const { return BigInt(x) & mask; }
    Word from_big(const BigInt& x) const { return x & mask; }
    Word from_value(std::int64_t x) const { return from_int(x); }
    Word from_value(const BigInt& x) const { return from_big(x); }
    static Word raw_int(std::int64_t x) { return BigInt(x); }
    static Word raw_from_big(const BigInt& x) { return x; }
    BigInt to_big(const Word& x) const { return x; }
    static bool is_zero(const Word& x) { return x == 0; }
    static bool is_odd(const Word& x) { return boost::multiprecision::bit_test(x, 0); }
    int twos(const Word& x) const {
        return x == 0 ? bits : static_cast<int>(boost::multiprecision::lsb(x));
    }
    static Word shr(const Word& x, int s) { return x >> s; }
    Word mul_half(const Word& x, const Word& y) const { return ((x * y) >> 1) & mask; }
    Word pow2(int e) const { return e >= bits ? BigInt(0) : (BigInt(1) << e); }
    void append_bytes(std::string& out, const Word& x) const { append_twos_complement(out, x); }
};

}  // namespace xisynth
