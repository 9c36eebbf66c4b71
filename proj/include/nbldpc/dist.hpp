#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "nbldpc/galois.hpp"

namespace nbldpc {

// Thrown when a probability vector collapses to all zeros (e.g. conflicting
// point masses); callers report failure instead of crashing on it.
class DegenerateMessageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OpCounter {
    std::uint64_t float_add = 0;
    std::uint64_t float_mul = 0;
    std::uint64_t gf_mul = 0;
};

// Probability distribution over GF(q): p[x] = Pr(symbol == x).
struct Dist {
    std::vector<double> p;

    Dist() = default;
    explicit Dist(int q, double fill = 0.0) : p(size_t(q), fill) {}
    explicit Dist(std::vector<double> v) : p(std::move(v)) {}

    int q() const { return int(p.size()); }
    double& operator[](int i) { return p[size_t(i)]; }
    double operator[](int i) const { return p[size_t(i)]; }

    static Dist uniform(int q) { return Dist(q, 1.0 / q); }
    static Dist point_mass(int q, Symbol x) {
        Dist d(q);
        d.p[x] = 1.0;
        return d;
    }
};

// Walsh-Hadamard image of a distribution; entries may be negative.
struct Spectrum {
    std::vector<double> s;
    int q() const { return int(s.size()); }
};

// In-place transform: one size-2 butterfly pass (u,v) -> (u+v, u-v) along
// each of the log2(q) binary dimensions; exactly q*log2(q) additions.
// Self-inverse up to a factor of q. Size must be a power of two.
void wht_inplace(std::span<double> v, OpCounter* ops = nullptr);

Spectrum wht(const Dist& d, OpCounter* ops = nullptr);
// Inverse direction: applies the transform, divides by q, and clamps the
// tiny negative rounding residue to zero.
Dist wht(const Spectrum& s, OpCounter* ops = nullptr);

// In-place: clamps negatives to zero and scales to unit sum.
// Throws DegenerateMessageError if the vector has no positive mass.
Dist& normalize(Dist& d);
Dist normalized(Dist d);

// out[h*x] = d[x] for nonzero h: the message seen through an edge label.
Dist scale_permute(const GaloisField& f, Symbol h, const Dist& d);

// Distribution of the sum of two independent GF(q) symbols (group with XOR
// addition): transform both, multiply pointwise, transform back. Exactly
// 3*q*log2(q) additions on the counter. Result is clamped and normalized.
Dist convolve(const Dist& a, const Dist& b, OpCounter* ops = nullptr);

// Normalized elementwise product (independent observations of one symbol).
Dist pointwise_product(std::span<const Dist> ds, OpCounter* ops = nullptr);

}  // namespace nbldpc
