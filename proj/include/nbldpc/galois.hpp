#pragma once

#include <array>
#include <cstdint>

namespace nbldpc {

using Symbol = std::uint16_t;

// Arithmetic in GF(2^m), 1 <= m <= 8, backed by log/antilog tables built
// from a primitive polynomial. Addition is XOR and needs no tables.
class GaloisField {
public:
    // Uses the default primitive polynomial for this m (see default_poly).
    explicit GaloisField(int m);
    // poly is the full modulus bit pattern including the x^m term,
    // e.g. 0x13 = x^4 + x + 1. Throws if poly is not primitive of degree m.
    GaloisField(int m, unsigned poly);

    int m() const { return m_; }
    int q() const { return q_; }
    unsigned modulus() const { return poly_; }

    Symbol add(Symbol a, Symbol b) const { return a ^ b; }

    Symbol mul(Symbol a, Symbol b) const {
        if (a == 0 || b == 0) return 0;
        int s = log_[a] + log_[b];
        if (s >= q_ - 1) s -= q_ - 1;
        return antilog_[s];
    }

    // Multiplicative inverse; throws std::domain_error on a == 0.
    Symbol inv(Symbol a) const;

    // Discrete log of a nonzero element (log of the fixed generator x).
    int log(Symbol a) const;
    Symbol antilog(int e) const { return antilog_[e % (q_ - 1)]; }

    static unsigned default_poly(int m);

private:
    void build_tables();

    int m_ = 0;
    int q_ = 0;
    unsigned poly_ = 0;
    std::array<std::uint8_t, 256> log_{};
    std::array<Symbol, 256> antilog_{};
};

}  // namespace nbldpc
