#include "nbldpc/sim.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace nbldpc {

double ebn0_to_n0(double ebn0_db, double rate_total, double bits_per_symbol) {
    if (!(rate_total > 0.0) || !(bits_per_symbol > 0.0))
        throw std::invalid_argument("ebn0_to_n0: rate and bits per symbol must be positive");
    return 1.0 / (rate_total * bits_per_symbol * std::pow(10.0, ebn0_db / 10.0));
}

void awgn_inplace(std::span<Cplx> x, double n0, Rng& rng) {
    const double sigma = std::sqrt(n0 / 2.0);
    for (Cplx& v : x) {
        double ni = sigma * rng.gaussian();
        double nq = sigma * rng.gaussian();
        v += Cplx(ni, nq);
    }
}

namespace {

struct Tally {
    std::uint64_t block_errors = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t iteration_sum = 0;
    std::vector<std::uint64_t> level_block_errors;
};

void run_one_trial(const MlcScheme& scheme, MsdWorkspace& ws, double n0,
                   std::uint64_t trial_seed, const RunOptions& opt, Tally& tally) {
    Rng rng(trial_seed);
    const int levels = scheme.num_levels();

    std::vector<std::vector<Symbol>> info(static_cast<size_t>(levels));
    for (int l = 0; l < levels; ++l) {
        const int len = scheme.level_info_len(l);
        const std::uint32_t q = std::uint32_t(1)
                                << scheme.spec().levels[size_t(l)].field_m;
        info[size_t(l)].resize(size_t(len), 0);
        if (!opt.zero_info)
            for (int i = 0; i < len; ++i) info[size_t(l)][size_t(i)] = Symbol(rng.below(q));
    }

    std::vector<std::vector<Symbol>> cws;
    std::vector<Cplx> x = scheme.encode(info, &cws);
    awgn_inplace(x, n0, rng);

    MsdResult res = scheme.decode(x, n0, opt.decode, ws,
                                  opt.genie_below > 0 ? &cws : nullptr, opt.genie_below);

    bool block_error = false;
    for (int l = opt.genie_below; l < levels; ++l) {
        const std::vector<Symbol>& got = res.levels[size_t(l)].info;
        const std::vector<Symbol>& want = info[size_t(l)];
        std::uint64_t bits = 0;
        for (size_t i = 0; i < want.size(); ++i)
            bits += std::uint64_t(std::popcount(unsigned(got[i] ^ want[i])));
        if (bits) {
            block_error = true;
            tally.level_block_errors[size_t(l)]++;
            tally.bit_errors += bits;
        }
    }
    if (block_error) tally.block_errors++;
    tally.iteration_sum += std::uint64_t(res.total_iterations);
}

}  // namespace

SimPoint run_point(const MlcScheme& scheme, double ebn0_db, const StopRule& stop,
                   std::uint64_t base_seed, const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const double n0 = ebn0_to_n0(ebn0_db, scheme.rate_total(),
                                 double(scheme.bits_per_symbol()));
    const std::uint64_t ebn0_bits = std::bit_cast<std::uint64_t>(ebn0_db);
    const int levels = scheme.num_levels();

    SimPoint p;
    p.ebn0_db = ebn0_db;
    p.info_bits_per_block = std::uint64_t(scheme.info_bits());
    p.level_block_errors.assign(size_t(levels), 0);

    const int workers = std::max(1, opt.workers);
    std::vector<std::unique_ptr<MsdWorkspace>> ws;
    for (int w = 0; w < workers; ++w) ws.push_back(std::make_unique<MsdWorkspace>(scheme));

    // Fixed batch size: the trial schedule never depends on the worker
    // count, so neither do the results.
    const std::uint64_t kBatch = 256;
    std::uint64_t done = 0;
    while (done < stop.max_trials && p.block_errors < stop.min_block_errors) {
        const std::uint64_t count = std::min(kBatch, stop.max_trials - done);
        std::vector<Tally> tallies(static_cast<size_t>(workers));
        for (auto& t : tallies) t.level_block_errors.assign(size_t(levels), 0);

        auto work = [&](int w) {
            const std::uint64_t lo = done + count * std::uint64_t(w) / std::uint64_t(workers);
            const std::uint64_t hi = done + count * std::uint64_t(w + 1) / std::uint64_t(workers);
            for (std::uint64_t t = lo; t < hi; ++t)
                run_one_trial(scheme, *ws[size_t(w)], n0,
                              mix_seed(base_seed, ebn0_bits, t), opt, tallies[size_t(w)]);
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
            for (auto& th : pool) th.join();
        }
        for (const Tally& t : tallies) {
            p.block_errors += t.block_errors;
            p.bit_errors += t.bit_errors;
            p.iteration_sum += t.iteration_sum;
            for (int l = 0; l < levels; ++l)
                p.level_block_errors[size_t(l)] += t.level_block_errors[size_t(l)];
        }
        done += count;
    }
    p.trials = done;
    p.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (opt.progress)
        std::cerr << scheme.name() << " @ " << ebn0_db << " dB: trials=" << p.trials
                  << " block_errors=" << p.block_errors << " bler=" << p.bler()
                  << " (" << p.wall_time_s << " s)\n";
    return p;
}

void write_csv_header(std::ostream& out) {
    out << "scheme,ebn0_db,trials,block_errors,bler,ber,avg_iterations,"
           "level_block_errors,seed\n";
}

void write_csv_row(std::ostream& out, const std::string& scheme_name, const SimPoint& p,
                   std::uint64_t seed) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.10g,%llu,%llu,%.9e,%.9e,%.6g",
                  p.ebn0_db, (unsigned long long)p.trials,
                  (unsigned long long)p.block_errors, p.bler(), p.ber(),
                  p.avg_iterations());
    out << scheme_name << ',' << buf << ',';
    for (size_t l = 0; l < p.level_block_errors.size(); ++l)
        out << p.level_block_errors[l] << (l + 1 < p.level_block_errors.size() ? "|" : "");
    out << ',' << seed << '\n';
}

std::vector<SimPoint> sweep(const MlcScheme& scheme, std::span<const double> ebn0_grid,
                            const StopRule& stop, std::uint64_t seed,
                            const std::string& out_path, const RunOptions& opt) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    write_csv_header(out);
    std::vector<SimPoint> points;
    for (double e : ebn0_grid) {
        points.push_back(run_point(scheme, e, stop, seed, opt));
        write_csv_row(out, scheme.name(), points.back(), seed);
        out.flush();
    }
    if (!out) throw std::runtime_error("write to '" + out_path + "' failed");
    return points;
}

}  // namespace nbldpc
