#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nbldpc/code.hpp"
#include "nbldpc/mlc.hpp"
#include "nbldpc/modem.hpp"

namespace nbldpc {

// Per-iteration decoding cost of one code, in the unit conventions of the
// decoder's own counters (see OpCounts):
//   gf_mul    = 2 (1-R) N avg_row                  edge-label permutations
//   float_add = 2 (1-R) N avg_row q log2 q         transform butterflies
//   float_mul = N ((1-R)(2 avg_row - 1) + (2 avg_col - 1)) (q - 1)
//                                                  message products
//   memory    = (1-R) N max_row (q-1)              independent message reals
struct ComplexityReport {
    std::int64_t gf_mul = 0;
    std::int64_t float_add = 0;
    std::int64_t float_mul = 0;
    std::int64_t memory = 0;

    ComplexityReport& operator+=(const ComplexityReport& o) {
        gf_mul += o.gf_mul;
        float_add += o.float_add;
        float_mul += o.float_mul;
        memory += o.memory;
        return *this;
    }
};

ComplexityReport complexity_estimate(double n, double rate, int q, double row_avg,
                                     double col_avg, double row_max);

// Parameters measured from an actual matrix.
ComplexityReport complexity_for_code(const Code& c);

// Sum over the coded levels of a constructed scheme.
ComplexityReport complexity_for_scheme(const MlcScheme& scheme);

struct ComplexityParams {
    double n = 0, rate = 0;
    int q = 0;
    double row_avg = 0, col_avg = 0, row_max = 0;
};

// Decoder parameter sets of the shipped non-binary schemes.
const std::vector<std::pair<std::string, ComplexityParams>>& complexity_presets();

struct CapacityEstimate {
    double bits = 0.0;
    double std_error = 0.0;
};

// Constellation-constrained mutual information of the complex AWGN channel
// at snr_db = 10 log10(Es/N0), by Monte-Carlo with a stratified symbol
// choice and a deterministic, chunked reduction (seed-reproducible at any
// thread count).
CapacityEstimate cm_capacity(int constellation, double snr_db,
                             std::uint64_t samples = 1000000,
                             std::uint64_t seed = 20240901);

// Smallest Eb/N0 (dB) at which the constrained capacity reaches
// rate_total * log2(constellation) bits, by bisection to 1e-3 bits.
// The same sample set is reused across the bisection.
double shannon_limit_db(int constellation, double rate_total,
                        std::uint64_t samples = 1000000,
                        std::uint64_t seed = 20240901);

double qfunc(double x);  // gaussian tail probability

// Closed-form block-error floor of a scheme whose top level is uncoded:
// per-axis PAM decision errors over the coset grid, combined across the two
// axes and the block's symbols.
double error_floor_uncoded(const LevelPartition& p, int n_symbols, double rate_total,
                           double ebn0_db);
double error_floor_uncoded(const MlcScheme& scheme, double ebn0_db);

}  // namespace nbldpc
