#include "doctest.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nbldpc/sim.hpp"

using namespace nbldpc;

namespace {

std::string temp_path(const char* name) {
    const char* base = std::getenv("NBLDPC_TMP");
    std::string dir = base ? base : "/tmp";
    std::filesystem::create_directories(dir);
    return dir + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(bool(in));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_header(const std::string& csv) {
    auto nl = csv.find('\n');
    REQUIRE(nl != std::string::npos);
    return csv.substr(nl + 1);
}

// Short two-level scheme (coded GF(16) + uncoded) so each trial is cheap.
const MlcScheme& short_scheme() {
    static MlcScheme s(preset("qam64-gf16-mlc").scaled(60), 2024);
    return s;
}

// Independent replay of the per-trial protocol: seed each trial from
// (base_seed, ebn0 bit pattern, trial index), draw the information symbols
// level by level, add noise with the same generator, decode, and count
// information-symbol bit errors on the non-genie levels.
SimPoint reference_point(const MlcScheme& scheme, double ebn0_db, std::uint64_t trials,
                         std::uint64_t base_seed, const RunOptions& opt) {
    const double n0 = ebn0_to_n0(ebn0_db, scheme.rate_total(),
                                 double(scheme.bits_per_symbol()));
    const std::uint64_t ebn0_bits = std::bit_cast<std::uint64_t>(ebn0_db);
    const int levels = scheme.num_levels();

    SimPoint p;
    p.ebn0_db = ebn0_db;
    p.trials = trials;
    p.info_bits_per_block = std::uint64_t(scheme.info_bits());
    p.level_block_errors.assign(static_cast<size_t>(levels), 0);

    MsdWorkspace ws(scheme);
    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng(mix_seed(base_seed, ebn0_bits, t));
        std::vector<std::vector<Symbol>> info(static_cast<size_t>(levels));
        for (int l = 0; l < levels; ++l) {
            const int len = scheme.level_info_len(l);
            const std::uint32_t q = std::uint32_t(1)
                                    << scheme.spec().levels[size_t(l)].field_m;
            info[size_t(l)].assign(static_cast<size_t>(len), 0);
            if (!opt.zero_info)
                for (int i = 0; i < len; ++i)
                    info[size_t(l)][size_t(i)] = Symbol(rng.below(q));
        }
        std::vector<std::vector<Symbol>> cws;
        std::vector<Cplx> x = scheme.encode(info, &cws);
        awgn_inplace(x, n0, rng);
        MsdResult res = scheme.decode(x, n0, opt.decode, ws,
                                      opt.genie_below > 0 ? &cws : nullptr,
                                      opt.genie_below);

        bool block_error = false;
        for (int l = opt.genie_below; l < levels; ++l) {
            std::uint64_t bits = 0;
            for (size_t i = 0; i < info[size_t(l)].size(); ++i)
                bits += std::uint64_t(std::popcount(
                    unsigned(res.levels[size_t(l)].info[i] ^ info[size_t(l)][i])));
            if (bits) {
                block_error = true;
                p.level_block_errors[size_t(l)]++;
                p.bit_errors += bits;
            }
        }
        if (block_error) p.block_errors++;
        p.iteration_sum += std::uint64_t(res.total_iterations);
    }
    return p;
}

void check_points_equal(const SimPoint& a, const SimPoint& b) {
    CHECK(a.ebn0_db == b.ebn0_db);
    CHECK(a.trials == b.trials);
    CHECK(a.block_errors == b.block_errors);
    CHECK(a.bit_errors == b.bit_errors);
    CHECK(a.info_bits_per_block == b.info_bits_per_block);
    CHECK(a.iteration_sum == b.iteration_sum);
    REQUIRE(a.level_block_errors.size() == b.level_block_errors.size());
    for (size_t l = 0; l < a.level_block_errors.size(); ++l)
        CHECK(a.level_block_errors[l] == b.level_block_errors[l]);
}

}  // namespace

TEST_SUITE("channel_sim") {

TEST_CASE("noise power follows the information-bit snr") {
    CHECK(ebn0_to_n0(0.0, 0.8, 6.0) == doctest::Approx(1.0 / 4.8).epsilon(1e-12));
    CHECK(ebn0_to_n0(10.0, 0.8, 6.0) == doctest::Approx(1.0 / 48.0).epsilon(1e-12));
    CHECK(ebn0_to_n0(3.0, 1.0, 1.0) == doctest::Approx(std::pow(10.0, -0.3)).epsilon(1e-12));
    // 10 dB more signal means a tenth of the noise.
    CHECK(ebn0_to_n0(7.0, 0.5, 4.0) ==
          doctest::Approx(10.0 * ebn0_to_n0(17.0, 0.5, 4.0)).epsilon(1e-12));

    CHECK_THROWS_AS(ebn0_to_n0(0.0, 0.0, 6.0), std::invalid_argument);
    CHECK_THROWS_AS(ebn0_to_n0(0.0, -0.5, 6.0), std::invalid_argument);
    CHECK_THROWS_AS(ebn0_to_n0(0.0, 0.8, 0.0), std::invalid_argument);
}

TEST_CASE("stop rule defaults") {
    StopRule s;
    CHECK(s.min_block_errors == 100);
    CHECK(s.max_trials == 1000000);
}

TEST_CASE("awgn consumes two gaussian draws per symbol in order") {
    const double n0 = 0.37;
    const double sigma = std::sqrt(n0 / 2.0);
    std::vector<Cplx> x = {{1.0, -1.0}, {0.25, 0.5}, {-3.0, 0.0}, {0.0, 7.0}, {2.0, 2.0}};
    std::vector<Cplx> y = x;

    Rng ra(99);
    awgn_inplace(y, n0, ra);

    Rng rb(99);
    for (Cplx& v : x) {
        double ni = sigma * rb.gaussian();
        double nq = sigma * rb.gaussian();
        v += Cplx(ni, nq);
    }
    for (size_t i = 0; i < x.size(); ++i) {
        CHECK(y[i].real() == x[i].real());
        CHECK(y[i].imag() == x[i].imag());
    }
    // Both generators sit at the same stream position afterwards.
    CHECK(ra.next() == rb.next());
}

TEST_CASE("awgn sample statistics match the requested power") {
    const double n0 = 0.5;
    const size_t count = 500000;
    std::vector<Cplx> x(count, Cplx(0.0, 0.0));
    Rng rng(314159);
    awgn_inplace(x, n0, rng);

    double mi = 0, mq = 0;
    for (const Cplx& v : x) {
        mi += v.real();
        mq += v.imag();
    }
    mi /= double(count);
    mq /= double(count);
    CHECK(std::abs(mi) < 3e-3);
    CHECK(std::abs(mq) < 3e-3);

    double vi = 0, vq = 0, cov = 0, pw = 0;
    for (const Cplx& v : x) {
        vi += (v.real() - mi) * (v.real() - mi);
        vq += (v.imag() - mq) * (v.imag() - mq);
        cov += (v.real() - mi) * (v.imag() - mq);
        pw += std::norm(v);
    }
    vi /= double(count);
    vq /= double(count);
    cov /= double(count);
    pw /= double(count);
    CHECK(vi == doctest::Approx(n0 / 2.0).epsilon(0.01));
    CHECK(vq == doctest::Approx(n0 / 2.0).epsilon(0.01));
    CHECK(std::abs(cov) < 2e-3);
    CHECK(pw == doctest::Approx(n0).epsilon(0.01));
}

TEST_CASE("csv header and row formatting") {
    std::ostringstream h;
    write_csv_header(h);
    CHECK(h.str() ==
          "scheme,ebn0_db,trials,block_errors,bler,ber,avg_iterations,"
          "level_block_errors,seed\n");

    SimPoint p;
    p.ebn0_db = 2.5;
    p.trials = 1000;
    p.block_errors = 10;
    p.bit_errors = 25;
    p.info_bits_per_block = 100;
    p.iteration_sum = 1500;
    p.level_block_errors = {3, 7};
    std::ostringstream row;
    write_csv_row(row, "x", p, 42);
    CHECK(row.str() == "x,2.5,1000,10,1.000000000e-02,2.500000000e-04,1.5,3|7,42\n");

    SimPoint single;
    single.ebn0_db = 4.125;
    single.trials = 256;
    single.block_errors = 0;
    single.bit_errors = 0;
    single.info_bits_per_block = 288;
    single.iteration_sum = 256;
    single.level_block_errors = {0};
    std::ostringstream row2;
    write_csv_row(row2, "solo", single, 7);
    CHECK(row2.str() == "solo,4.125,256,0,0.000000000e+00,0.000000000e+00,1,0,7\n");

    SimPoint empty;  // accessors must not divide by zero trials
    CHECK(empty.bler() == 0.0);
    CHECK(empty.ber() == 0.0);
    CHECK(empty.avg_iterations() == 0.0);
}

TEST_CASE("measurement replays an independent trial transcript") {
    const MlcScheme& scheme = short_scheme();
    RunOptions opt;
    opt.decode.max_iterations = 8;

    StopRule stop;
    stop.min_block_errors = ~std::uint64_t(0);  // run all trials
    stop.max_trials = 300;                      // one full batch plus a partial one

    SimPoint got = run_point(scheme, 9.0, stop, 77, opt);
    SimPoint want = reference_point(scheme, 9.0, 300, 77, opt);
    check_points_equal(got, want);

    CHECK(got.trials == 300);
    CHECK(got.info_bits_per_block == 288);
    REQUIRE(got.level_block_errors.size() == 2);
    // Some trials fail and some succeed at this operating point, every
    // errored block shows up in at least one level, and bits imply blocks.
    CHECK(got.block_errors > 0);
    CHECK(got.block_errors < got.trials);
    CHECK(got.level_block_errors[0] + got.level_block_errors[1] >= got.block_errors);
    CHECK(got.level_block_errors[0] + got.level_block_errors[1] <=
          2 * got.block_errors);
    CHECK(got.bit_errors >= got.block_errors);
    CHECK(got.bler() == doctest::Approx(double(got.block_errors) / 300.0));
}

TEST_CASE("genie levels are excluded from error accounting") {
    const MlcScheme& scheme = short_scheme();
    RunOptions opt;
    opt.decode.max_iterations = 8;
    opt.genie_below = 1;

    StopRule stop;
    stop.min_block_errors = ~std::uint64_t(0);
    stop.max_trials = 200;

    SimPoint got = run_point(scheme, 5.0, stop, 77, opt);
    SimPoint want = reference_point(scheme, 5.0, 200, 77, opt);
    check_points_equal(got, want);
    CHECK(got.level_block_errors[0] == 0);
}

TEST_CASE("all-zero information blocks replay identically") {
    const MlcScheme& scheme = short_scheme();
    RunOptions opt;
    opt.decode.max_iterations = 8;
    opt.zero_info = true;

    StopRule stop;
    stop.min_block_errors = ~std::uint64_t(0);
    stop.max_trials = 200;

    SimPoint got = run_point(scheme, 5.0, stop, 77, opt);
    SimPoint want = reference_point(scheme, 5.0, 200, 77, opt);
    check_points_equal(got, want);
}

TEST_CASE("results do not depend on the worker count") {
    const MlcScheme& scheme = short_scheme();
    RunOptions one;
    one.decode.max_iterations = 8;
    RunOptions three = one;
    three.workers = 3;

    StopRule stop;
    stop.min_block_errors = ~std::uint64_t(0);
    stop.max_trials = 300;

    SimPoint a = run_point(scheme, 5.0, stop, 123, one);
    SimPoint b = run_point(scheme, 5.0, stop, 123, three);
    check_points_equal(a, b);
}

TEST_CASE("sweep files are byte-identical across worker counts") {
    const MlcScheme& scheme = short_scheme();
    std::vector<double> grid = {2.0, 5.0};
    StopRule stop;
    stop.min_block_errors = 40;
    stop.max_trials = 256;

    RunOptions one;
    one.decode.max_iterations = 8;
    RunOptions three = one;
    three.workers = 3;

    const std::string p1 = temp_path("sweep_w1.csv");
    const std::string p3 = temp_path("sweep_w3.csv");
    sweep(scheme, grid, stop, 7, p1, one);
    sweep(scheme, grid, stop, 7, p3, three);
    CHECK(slurp(p1) == slurp(p3));
}

TEST_CASE("each grid point is seeded by its value, not its position") {
    const MlcScheme& scheme = short_scheme();
    StopRule stop;
    stop.min_block_errors = 40;
    stop.max_trials = 256;
    RunOptions opt;
    opt.decode.max_iterations = 8;

    std::vector<double> full = {2.0, 5.0};
    std::vector<double> head = {2.0};
    std::vector<double> tail = {5.0};

    const std::string pf = temp_path("sweep_full.csv");
    const std::string ph = temp_path("sweep_head.csv");
    const std::string pt = temp_path("sweep_tail.csv");
    sweep(scheme, full, stop, 7, pf, opt);
    sweep(scheme, head, stop, 7, ph, opt);
    sweep(scheme, tail, stop, 7, pt, opt);

    CHECK(strip_header(slurp(pf)) ==
          strip_header(slurp(ph)) + strip_header(slurp(pt)));

    // Rows carry the scheme name and the base seed.
    std::string first_row = strip_header(slurp(ph));
    CHECK(first_row.substr(0, scheme.name().size() + 1) == scheme.name() + ",");
    CHECK(first_row.find(",7\n") == first_row.size() - 3);
}

TEST_CASE("stop rule is honored at batch boundaries") {
    const MlcScheme& scheme = short_scheme();
    RunOptions opt;
    opt.decode.max_iterations = 8;

    // A trial cap below one batch is exact.
    StopRule cap;
    cap.min_block_errors = ~std::uint64_t(0);
    cap.max_trials = 100;
    SimPoint p = run_point(scheme, 5.0, cap, 9, opt);
    CHECK(p.trials == 100);

    // With plentiful errors the run stops after the first full batch.
    StopRule eager;
    eager.min_block_errors = 1;
    eager.max_trials = 100000;
    SimPoint q = run_point(scheme, 2.0, eager, 9, opt);
    CHECK(q.trials == 256);
    CHECK(q.block_errors >= 1);

    // Far above threshold nothing fails and the trial budget is exhausted.
    StopRule quiet;
    quiet.min_block_errors = 1;
    quiet.max_trials = 512;
    SimPoint r = run_point(scheme, 18.0, quiet, 9, opt);
    CHECK(r.trials == 512);
    CHECK(r.block_errors == 0);
    CHECK(r.bit_errors == 0);
}

TEST_CASE("empty grids and bad paths") {
    const MlcScheme& scheme = short_scheme();
    StopRule stop;
    stop.max_trials = 1;

    const std::string p = temp_path("sweep_empty.csv");
    std::vector<SimPoint> points = sweep(scheme, std::vector<double>{}, stop, 1, p);
    CHECK(points.empty());
    CHECK(slurp(p) ==
          "scheme,ebn0_db,trials,block_errors,bler,ber,avg_iterations,"
          "level_block_errors,seed\n");

    CHECK_THROWS_AS(sweep(scheme, std::vector<double>{1.0}, stop, 1,
                          "/nonexistent_dir_zz/out.csv"),
                    std::runtime_error);
}

}  // TEST_SUITE
