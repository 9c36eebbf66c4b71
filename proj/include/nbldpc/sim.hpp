#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nbldpc/mlc.hpp"
#include "nbldpc/rng.hpp"

namespace nbldpc {

// Noise power for a target information-bit SNR at unit symbol energy:
// n0 = 1 / (rate_total * bits_per_symbol * 10^(ebn0_db/10)).
double ebn0_to_n0(double ebn0_db, double rate_total, double bits_per_symbol);

// Adds complex gaussian noise with variance n0/2 per real dimension;
// consumes exactly two gaussian draws per symbol, in symbol order.
void awgn_inplace(std::span<Cplx> x, double n0, Rng& rng);

struct StopRule {
    std::uint64_t min_block_errors = 100;
    std::uint64_t max_trials = 1000000;
};

struct SimPoint {
    double ebn0_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t block_errors = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t info_bits_per_block = 0;
    std::uint64_t iteration_sum = 0;
    std::vector<std::uint64_t> level_block_errors;
    double wall_time_s = 0.0;  // informational; never written to CSV

    double bler() const { return trials ? double(block_errors) / double(trials) : 0.0; }
    double ber() const {
        return trials ? double(bit_errors) / (double(trials) * double(info_bits_per_block))
                      : 0.0;
    }
    double avg_iterations() const {
        return trials ? double(iteration_sum) / double(trials) : 0.0;
    }
};

struct RunOptions {
    DecodeOptions decode;
    int workers = 1;
    bool zero_info = false;   // send the all-zero information block
    bool progress = false;    // one stderr line per finished point
    int genie_below = 0;      // feed true symbols to levels below this index
};

// Monte-Carlo block-error measurement at one operating point. Every trial
// derives its generator from (base_seed, the ebn0 value's bit pattern, the
// trial index), so results are reproducible per point regardless of grid
// layout, worker count, or stop rule. Trials run in fixed-size batches with
// stop checks only at batch boundaries, which makes the outcome independent
// of the degree of parallelism.
SimPoint run_point(const MlcScheme& scheme, double ebn0_db, const StopRule& stop,
                   std::uint64_t base_seed, const RunOptions& opt = {});

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const std::string& scheme_name, const SimPoint& p,
                   std::uint64_t seed);

// Runs every grid point and appends CSV rows to out_path (header first).
// Identical inputs produce byte-identical files.
std::vector<SimPoint> sweep(const MlcScheme& scheme, std::span<const double> ebn0_grid,
                            const StopRule& stop, std::uint64_t seed,
                            const std::string& out_path, const RunOptions& opt = {});

}  // namespace nbldpc
