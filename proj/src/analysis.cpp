#include "nbldpc/analysis.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nbldpc/rng.hpp"
#include "nbldpc/sim.hpp"

namespace nbldpc {

ComplexityReport complexity_estimate(double n, double rate, int q, double row_avg,
                                     double col_avg, double row_max) {
    if (!(n > 0) || !(rate > 0.0) || !(rate < 1.0))
        throw std::invalid_argument("complexity: need n > 0 and 0 < rate < 1");
    if (q < 2 || !std::has_single_bit(unsigned(q)))
        throw std::invalid_argument("complexity: q must be a power of two >= 2");
    if (!(row_avg > 0) || !(col_avg > 0) || !(row_max > 0))
        throw std::invalid_argument("complexity: weights must be positive");

    const double checks = (1.0 - rate) * n;
    const double log2q = std::log2(double(q));
    ComplexityReport r;
    r.gf_mul = std::llround(2.0 * checks * row_avg);
    r.float_add = std::llround(2.0 * checks * row_avg * q * log2q);
    r.float_mul =
        std::llround(n * ((1.0 - rate) * (2.0 * row_avg - 1.0) + (2.0 * col_avg - 1.0)) *
                     (q - 1));
    r.memory = std::llround(checks * row_max * (q - 1));
    return r;
}

ComplexityReport complexity_for_code(const Code& c) {
    return complexity_estimate(double(c.n()), c.rate(), c.field().q(), c.avg_row_weight(),
                               c.avg_col_weight(), double(c.max_row_weight()));
}

ComplexityReport complexity_for_scheme(const MlcScheme& scheme) {
    ComplexityReport total;
    for (int l = 0; l < scheme.num_levels(); ++l)
        if (const Code* c = scheme.level_code(l)) total += complexity_for_code(*c);
    return total;
}

const std::vector<std::pair<std::string, ComplexityParams>>& complexity_presets() {
    static const std::vector<std::pair<std::string, ComplexityParams>> table = {
        {"qam64-gf64", {2000, 0.8, 64, 10.0, 2.0, 11}},
        {"qam64-gf16-mlc", {2000, 0.7, 16, 7.5, 2.25, 8}},
        {"qam256-gf256", {1500, 0.8, 256, 10.0, 2.0, 11}},
        {"qam256-gf16-mlc", {1500, 0.6, 16, 5.625, 2.25, 6}},
    };
    return table;
}

namespace {

struct CapacityAccum {
    double sum = 0.0;
    double sumsq = 0.0;
};

// One deterministic chunk of the Monte-Carlo capacity sum. Transmitted
// symbols are stratified by global sample index; the noise stream is seeded
// per chunk, so any parallel split over chunks reproduces the same total.
CapacityAccum capacity_chunk(const Constellation& c, double n0, std::uint64_t first,
                             std::uint64_t count, std::uint64_t chunk_index,
                             std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0x6361702d6d63ull, chunk_index));
    const double sigma = std::sqrt(n0 / 2.0);
    const double log2e = std::numbers::log2e;
    CapacityAccum acc;
    for (std::uint64_t g = first; g < first + count; ++g) {
        const Cplx x = c.point(int(g % std::uint64_t(c.size)));
        const double zi = rng.gaussian(), zq = rng.gaussian();
        const double yi = x.real() + sigma * zi;
        const double yq = x.imag() + sigma * zq;
        const double d0 = sigma * sigma * (zi * zi + zq * zq);

        double si = 0.0, sq = 0.0;
        for (int u = 0; u < c.side; ++u) {
            const double di = yi - c.amp(u);
            const double dq = yq - c.amp(u);
            si += std::exp(-di * di / n0);
            sq += std::exp(-dq * dq / n0);
        }
        const double log2s = d0 / n0 * log2e + std::log2(si) + std::log2(sq);
        acc.sum += log2s;
        acc.sumsq += log2s * log2s;
    }
    return acc;
}

CapacityEstimate capacity_at_n0(const Constellation& c, double n0, std::uint64_t samples,
                                std::uint64_t seed) {
    const std::uint64_t kChunks = 64;
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t ch = 0; ch < kChunks; ++ch) {
        const std::uint64_t lo = samples * ch / kChunks;
        const std::uint64_t hi = samples * (ch + 1) / kChunks;
        CapacityAccum a = capacity_chunk(c, n0, lo, hi - lo, ch, seed);
        sum += a.sum;
        sumsq += a.sumsq;
    }
    const double mean = sum / double(samples);
    const double var = std::max(0.0, sumsq / double(samples) - mean * mean);
    CapacityEstimate est;
    est.bits = std::log2(double(c.size)) - mean;
    est.std_error = std::sqrt(var / double(samples));
    return est;
}

}  // namespace

CapacityEstimate cm_capacity(int constellation, double snr_db, std::uint64_t samples,
                             std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("cm_capacity: need at least one sample");
    const Constellation c = Constellation::square_natural(constellation);
    const double n0 = std::pow(10.0, -snr_db / 10.0);  // unit symbol energy
    return capacity_at_n0(c, n0, samples, seed);
}

double shannon_limit_db(int constellation, double rate_total, std::uint64_t samples,
                        std::uint64_t seed) {
    const Constellation c = Constellation::square_natural(constellation);
    const double bits = std::log2(double(c.size));
    const double target = rate_total * bits;
    if (!(rate_total > 0.0) || !(rate_total < 1.0))
        throw std::invalid_argument("shannon_limit: need 0 < rate < 1");

    const double snr_offset = 10.0 * std::log10(rate_total * bits);  // Es/N0 per Eb/N0
    auto capacity_at = [&](double ebn0_db) {
        const double n0 = std::pow(10.0, -(ebn0_db + snr_offset) / 10.0);
        return capacity_at_n0(c, n0, samples, seed).bits;
    };

    double lo = -10.0, hi = 40.0;
    if (capacity_at(lo) >= target || capacity_at(hi) <= target)
        throw std::runtime_error("shannon_limit: rate is outside the bracket");
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        mid = 0.5 * (lo + hi);
        const double cbits = capacity_at(mid);
        if (std::abs(cbits - target) <= 1e-3 || hi - lo < 1e-7) return mid;
        (cbits < target ? lo : hi) = mid;
    }
    return mid;
}

double qfunc(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double error_floor_uncoded(const LevelPartition& p, int n_symbols, double rate_total,
                           double ebn0_db) {
    if (n_symbols < 1) throw std::invalid_argument("error_floor: need at least one symbol");
    const int top = p.levels() - 1;
    const double n0 = ebn0_to_n0(ebn0_db, rate_total, double(p.bits));
    const double sigma = std::sqrt(n0 / 2.0);

    // Within a coset the candidate amplitudes form a uniform per-axis grid;
    // interior points err toward two neighbors, edge points toward one.
    auto axis_error = [&](int bits_on_axis, int shift) {
        if (bits_on_axis == 0) return 0.0;
        const int K = 1 << bits_on_axis;
        const double spacing = double(1 << shift) * p.fine_step();
        return 2.0 * double(K - 1) / double(K) * qfunc(spacing / (2.0 * sigma));
    };
    const double pi = axis_error(p.i_bits[size_t(top)], p.i_shift[size_t(top)]);
    const double pq = axis_error(p.q_bits[size_t(top)], p.q_shift[size_t(top)]);
    const double psym = pi + pq - pi * pq;
    return -std::expm1(double(n_symbols) * std::log1p(-psym));
}

double error_floor_uncoded(const MlcScheme& scheme, double ebn0_db) {
    const LevelPartition* p = scheme.partition();
    if (!p) throw std::invalid_argument("error_floor: scheme has no lattice levels");
    if (scheme.spec().levels.back().coded)
        throw std::invalid_argument("error_floor: the top level is coded");
    return error_floor_uncoded(*p, scheme.n_symbols(), scheme.rate_total(), ebn0_db);
}

}  // namespace nbldpc
