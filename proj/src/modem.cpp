#include "nbldpc/modem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nbldpc {

namespace {

int check_square_size(int size) {
    for (int bits = 2; bits <= 8; bits += 2)
        if (size == (1 << bits)) return bits;
    throw std::invalid_argument("constellation size must be 4, 16, 64, or 256");
}

int gray_inv(int g) {
    int u = g;
    u ^= u >> 1;
    u ^= u >> 2;
    u ^= u >> 4;
    return u;
}

double axis_scale(int side) {
    // Mean energy of the odd-amplitude grid +-1, +-3, ..., over both axes.
    double e = 0.0;
    for (int u = 0; u < side; ++u) {
        double a = 2 * u - (side - 1);
        e += a * a;
    }
    e = 2.0 * e / side;
    return 1.0 / std::sqrt(e);
}

Constellation make_square(int size, bool use_gray) {
    Constellation c;
    c.size = size;
    c.bits = check_square_size(size);
    c.axis_bits = c.bits / 2;
    c.side = 1 << c.axis_bits;
    c.scale = axis_scale(c.side);
    c.point_of_label.resize(static_cast<size_t>(size));
    c.i_index.resize(static_cast<size_t>(size));
    c.q_index.resize(static_cast<size_t>(size));
    const int mask = c.side - 1;
    for (int a = 0; a < size; ++a) {
        int gi = a & mask, gq = a >> c.axis_bits;
        int ui = use_gray ? gray_inv(gi) : gi;
        int uq = use_gray ? gray_inv(gq) : gq;
        c.i_index[size_t(a)] = ui;
        c.q_index[size_t(a)] = uq;
        c.point_of_label[size_t(a)] = {c.amp(ui), c.amp(uq)};
    }
    return c;
}

}  // namespace

Constellation Constellation::square_gray(int size) { return make_square(size, true); }
Constellation Constellation::square_natural(int size) { return make_square(size, false); }

LevelPartition LevelPartition::make(int size, std::vector<int> widths) {
    LevelPartition p;
    p.size = size;
    p.bits = check_square_size(size);
    p.axis_bits = p.bits / 2;
    p.side = 1 << p.axis_bits;
    p.scale = axis_scale(p.side);
    p.widths = std::move(widths);

    int total = 0;
    for (int w : p.widths) {
        if (w < 1) throw std::invalid_argument("level width must be at least 1");
        total += w;
    }
    if (total != p.bits)
        throw std::invalid_argument("level widths must sum to log2(constellation size)");

    int rem_i = p.axis_bits, rem_q = p.axis_bits;
    for (int w : p.widths) {
        int ai = std::min((w + 1) / 2, rem_i);
        int qi = w - ai;
        if (qi > rem_q) {
            qi = rem_q;
            ai = w - qi;
        }
        if (ai < 0 || ai > rem_i)
            throw std::invalid_argument("level widths cannot be split across the axes");
        p.i_bits.push_back(ai);
        p.q_bits.push_back(qi);
        p.i_shift.push_back(p.axis_bits - rem_i);
        p.q_shift.push_back(p.axis_bits - rem_q);
        rem_i -= ai;
        rem_q -= qi;
    }
    return p;
}

Cplx LevelPartition::map_point(std::span<const Symbol> level_symbols) const {
    if (int(level_symbols.size()) != levels())
        throw std::invalid_argument("map_point: one symbol per level expected");
    int idx_i = 0, idx_q = 0;
    for (int l = 0; l < levels(); ++l) {
        const Symbol s = level_symbols[size_t(l)];
        if (s >= (1 << widths[size_t(l)]))
            throw std::invalid_argument("map_point: symbol exceeds the level width");
        const int ai = i_bits[size_t(l)];
        idx_i |= (s & ((1 << ai) - 1)) << i_shift[size_t(l)];
        idx_q |= (s >> ai) << q_shift[size_t(l)];
    }
    return {amp(idx_i), amp(idx_q)};
}

double LevelPartition::min_intra_distance(int level) const {
    if (level < 0 || level >= levels())
        throw std::invalid_argument("min_intra_distance: level out of range");
    // Enumerate the coset with all lower-level symbols zero; cosets are
    // translates of each other, so the distances are shared.
    std::vector<Cplx> pts;
    std::vector<Symbol> syms(size_t(levels()), 0);
    int free_bits = 0;
    for (int l = level; l < levels(); ++l) free_bits += widths[size_t(l)];
    for (int v = 0; v < (1 << free_bits); ++v) {
        int rest = v;
        for (int l = level; l < levels(); ++l) {
            syms[size_t(l)] = Symbol(rest & ((1 << widths[size_t(l)]) - 1));
            rest >>= widths[size_t(l)];
        }
        pts.push_back(map_point(syms));
    }
    double best = 1e300;
    for (size_t a = 0; a < pts.size(); ++a)
        for (size_t b = a + 1; b < pts.size(); ++b)
            best = std::min(best, std::abs(pts[a] - pts[b]));
    if (pts.size() < 2) throw std::logic_error("min_intra_distance: degenerate coset");
    return best;
}

Dist demap_level(const LevelPartition& p, int level, Cplx y, double n0,
                 std::span<const Symbol> decided_lower) {
    if (level < 0 || level >= p.levels())
        throw std::invalid_argument("demap_level: level out of range");
    if (int(decided_lower.size()) != level)
        throw std::invalid_argument("demap_level: need one decision per lower level");
    if (!(n0 > 0.0)) throw std::invalid_argument("demap_level: noise power must be positive");

    int base_i = 0, base_q = 0;
    for (int l = 0; l < level; ++l) {
        const Symbol s = decided_lower[size_t(l)];
        if (s >= (1 << p.widths[size_t(l)]))
            throw std::invalid_argument("demap_level: lower decision exceeds the level width");
        const int ai = p.i_bits[size_t(l)];
        base_i |= (s & ((1 << ai) - 1)) << p.i_shift[size_t(l)];
        base_q |= (s >> ai) << p.q_shift[size_t(l)];
    }

    // Per-axis sums over the points consistent with the lower decisions,
    // bucketed by this level's bits; higher levels marginalize away.
    // A shared per-axis max keeps the exponentials in range.
    auto axis_sums = [&](double ya, int base, int shift, int lbits) {
        const int lower_mask = (1 << shift) - 1;
        std::vector<double> expo(size_t(p.side));
        double mx = -1e300;
        for (int u = 0; u < p.side; ++u) {
            if ((u & lower_mask) != base) continue;
            double d = ya - p.amp(u);
            expo[size_t(u)] = -d * d / n0;
            mx = std::max(mx, expo[size_t(u)]);
        }
        std::vector<double> sums(size_t(1) << lbits, 0.0);
        for (int u = 0; u < p.side; ++u) {
            if ((u & lower_mask) != base) continue;
            int part = (u >> shift) & ((1 << lbits) - 1);
            sums[size_t(part)] += std::exp(expo[size_t(u)] - mx);
        }
        return sums;
    };

    const int ai = p.i_bits[size_t(level)];
    std::vector<double> si = axis_sums(y.real(), base_i, p.i_shift[size_t(level)], ai);
    std::vector<double> sq = axis_sums(y.imag(), base_q, p.q_shift[size_t(level)],
                                       p.q_bits[size_t(level)]);

    Dist out(1 << p.widths[size_t(level)]);
    for (int b = 0; b < out.q(); ++b)
        out[b] = si[size_t(b & ((1 << ai) - 1))] * sq[size_t(b >> ai)];
    return normalize(out);
}

namespace {

// exp(-(ya - amp(u))^2 / n0) per axis position, scaled by the axis max.
std::vector<double> axis_weights(const Constellation& c, double ya, double n0) {
    std::vector<double> e(size_t(c.side));
    double mx = -1e300;
    for (int u = 0; u < c.side; ++u) {
        double d = ya - c.amp(u);
        e[size_t(u)] = -d * d / n0;
        mx = std::max(mx, e[size_t(u)]);
    }
    for (int u = 0; u < c.side; ++u) e[size_t(u)] = std::exp(e[size_t(u)] - mx);
    return e;
}

}  // namespace

std::vector<Dist> demap_bits_binary(const Constellation& c, Cplx y, double n0) {
    if (!(n0 > 0.0)) throw std::invalid_argument("demap_bits_binary: noise power must be positive");
    std::vector<double> wi = axis_weights(c, y.real(), n0);
    std::vector<double> wq = axis_weights(c, y.imag(), n0);

    // Axis position -> axis label part, honoring the constellation's own
    // labeling (Gray or natural).
    std::vector<int> lab_i(size_t(c.side)), lab_q(size_t(c.side));
    for (int g = 0; g < c.side; ++g) {
        lab_i[size_t(c.i_index[size_t(g)])] = g;
        lab_q[size_t(c.q_index[size_t(g << c.axis_bits)])] = g;
    }

    std::vector<Dist> out;
    out.reserve(size_t(c.bits));
    for (int k = 0; k < c.bits; ++k) {
        const bool on_i = k < c.axis_bits;
        const int bit = on_i ? k : k - c.axis_bits;
        const std::vector<double>& w = on_i ? wi : wq;
        const std::vector<int>& lab = on_i ? lab_i : lab_q;
        Dist d(2);
        for (int u = 0; u < c.side; ++u) d[(lab[size_t(u)] >> bit) & 1] += w[size_t(u)];
        out.push_back(normalized(d));
    }
    return out;
}

Dist demap_symbol_full(const Constellation& c, Cplx y, double n0) {
    if (!(n0 > 0.0)) throw std::invalid_argument("demap_symbol_full: noise power must be positive");
    std::vector<double> wi = axis_weights(c, y.real(), n0);
    std::vector<double> wq = axis_weights(c, y.imag(), n0);
    Dist out(c.size);
    for (int a = 0; a < c.size; ++a)
        out[a] = wi[size_t(c.i_index[size_t(a)])] * wq[size_t(c.q_index[size_t(a)])];
    return normalize(out);
}

}  // namespace nbldpc
