#include "nbldpc/dist.hpp"

#include <bit>
#include <cmath>

namespace nbldpc {

static void require_pow2(size_t n, const char* what) {
    if (n == 0 || !std::has_single_bit(n))
        throw std::invalid_argument(std::string(what) + ": size must be a power of two");
}

void wht_inplace(std::span<double> v, OpCounter* ops) {
    require_pow2(v.size(), "wht");
    const size_t n = v.size();
    for (size_t h = 1; h < n; h <<= 1) {
        for (size_t i = 0; i < n; i += h << 1) {
            for (size_t j = i; j < i + h; ++j) {
                double u = v[j], w = v[j + h];
                v[j] = u + w;
                v[j + h] = u - w;
            }
        }
    }
    if (ops) ops->float_add += std::uint64_t(n) * std::uint64_t(std::countr_zero(n));
}

Spectrum wht(const Dist& d, OpCounter* ops) {
    Spectrum s{d.p};
    wht_inplace(s.s, ops);
    return s;
}

Dist wht(const Spectrum& s, OpCounter* ops) {
    Dist d(std::vector<double>(s.s));
    wht_inplace(d.p, ops);
    const double inv_q = 1.0 / double(d.q());
    for (double& x : d.p) {
        x *= inv_q;
        if (x < 0.0) x = 0.0;
    }
    if (ops) ops->float_mul += std::uint64_t(d.q());
    return d;
}

Dist& normalize(Dist& d) {
    double sum = 0.0;
    for (double& x : d.p) {
        if (x < 0.0) x = 0.0;
        sum += x;
    }
    if (!(sum > 0.0) || !std::isfinite(sum))
        throw DegenerateMessageError("message has no positive mass");
    const double inv = 1.0 / sum;
    for (double& x : d.p) x *= inv;
    return d;
}

Dist normalized(Dist d) {
    normalize(d);
    return d;
}

Dist scale_permute(const GaloisField& f, Symbol h, const Dist& d) {
    if (d.q() != f.q()) throw std::invalid_argument("scale_permute: size mismatch");
    if (h == 0) throw std::invalid_argument("scale_permute: label must be nonzero");
    Dist out(d.q());
    for (int x = 0; x < d.q(); ++x) out[f.mul(h, Symbol(x))] = d[x];
    return out;
}

Dist convolve(const Dist& a, const Dist& b, OpCounter* ops) {
    if (a.q() != b.q()) throw std::invalid_argument("convolve: size mismatch");
    require_pow2(a.p.size(), "convolve");
    std::vector<double> fa(a.p), fb(b.p);
    wht_inplace(fa, ops);
    wht_inplace(fb, ops);
    for (size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    if (ops) ops->float_mul += fa.size();
    wht_inplace(fa, ops);
    // The trailing 1/q of the inverse transform is absorbed by normalization.
    Dist out(std::move(fa));
    normalize(out);
    return out;
}

Dist pointwise_product(std::span<const Dist> ds, OpCounter* ops) {
    if (ds.empty()) throw std::invalid_argument("pointwise_product: empty input");
    Dist out = ds[0];
    for (size_t k = 1; k < ds.size(); ++k) {
        if (ds[k].q() != out.q())
            throw std::invalid_argument("pointwise_product: size mismatch");
        for (int x = 0; x < out.q(); ++x) out[x] *= ds[k][x];
        if (ops) ops->float_mul += std::uint64_t(out.q());
    }
    normalize(out);
    return out;
}

}  // namespace nbldpc
