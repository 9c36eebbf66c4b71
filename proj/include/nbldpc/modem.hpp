#pragma once

#include <complex>
#include <span>
#include <vector>

#include "nbldpc/dist.hpp"
#include "nbldpc/galois.hpp"

namespace nbldpc {

using Cplx = std::complex<double>;

// Square QAM grid scaled to unit average symbol energy. Labels are
// per-axis: the low half of the label bits indexes the in-phase amplitude,
// the high half the quadrature amplitude, either in binary-reflected Gray
// order (gray variant) or in plain lattice order (natural variant).
struct Constellation {
    int size = 0;       // number of points, a power of 4
    int bits = 0;       // log2(size)
    int side = 0;       // amplitudes per axis
    int axis_bits = 0;  // bits per axis
    double scale = 1.0; // 1/sqrt(average unnormalized energy)
    std::vector<Cplx> point_of_label;
    std::vector<int> i_index, q_index;  // per-label axis positions

    static Constellation square_gray(int size);
    static Constellation square_natural(int size);

    Cplx point(int label) const { return point_of_label[size_t(label)]; }
    // Distance between adjacent amplitudes on one axis.
    double fine_step() const { return 2.0 * scale; }
    double amp(int u) const { return (2 * u - (side - 1)) * scale; }
};

// Splits the label bits of a square constellation into ordered levels for
// multilevel coding. Level 0 owns the least-significant lattice coordinates
// (finest spacing); within a level the symbol's low bits go to the I axis.
// Per level the axis split is as even as possible, the I axis taking the
// extra bit, clamped by how many bits each axis still has free.
struct LevelPartition {
    int size = 0, bits = 0, side = 0, axis_bits = 0;
    double scale = 1.0;
    std::vector<int> widths;            // bits per level, sums to `bits`
    std::vector<int> i_bits, q_bits;    // per-level axis allocation
    std::vector<int> i_shift, q_shift;  // bit offsets into the axis indices

    static LevelPartition make(int size, std::vector<int> widths);

    int levels() const { return int(widths.size()); }
    double fine_step() const { return 2.0 * scale; }
    double amp(int u) const { return (2 * u - (side - 1)) * scale; }

    // One symbol per level -> constellation point.
    Cplx map_point(std::span<const Symbol> level_symbols) const;

    // Smallest distance between distinct points that agree on all levels
    // below `level` (enumerated, not assumed).
    double min_intra_distance(int level) const;
};

// Posterior over the symbols of one level given the received point and hard
// decisions for all lower levels; higher levels are marginalized. Exact
// log-sum-exp evaluation (per axis), normalized.
Dist demap_level(const LevelPartition& p, int level, Cplx y, double n0,
                 std::span<const Symbol> decided_lower);

// Per-bit posteriors (Dist of size 2 per label bit) for a Gray-labeled
// constellation; bits are ordered label-LSB first.
std::vector<Dist> demap_bits_binary(const Constellation& c, Cplx y, double n0);

// Full symbol posterior: pairwise ratios are exactly
// exp((|y-b|^2 - |y-a|^2) / n0).
Dist demap_symbol_full(const Constellation& c, Cplx y, double n0);

}  // namespace nbldpc
