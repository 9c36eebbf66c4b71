#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "nbldpc/code.hpp"
#include "nbldpc/qspa.hpp"
#include "nbldpc/rng.hpp"
#include "support/binary_spa_ref.hpp"

using namespace nbldpc;

namespace {

Dist random_dist(int q, Rng& rng) {
    Dist d(q);
    double sum = 0;
    for (int i = 0; i < q; ++i) {
        d[i] = rng.unit() + 1e-6;
        sum += d[i];
    }
    for (int i = 0; i < q; ++i) d[i] /= sum;
    return d;
}

// Exhaustive reference for one check node: out_k(x) sums the probability of
// every assignment of the other edges that the constraint completes with x.
std::vector<Dist> check_update_brute(const GaloisField& f, std::span<const Symbol> labels,
                                     std::span<const Dist> incoming) {
    const int q = f.q();
    const int deg = int(labels.size());
    std::vector<Dist> out(static_cast<size_t>(deg), Dist(q));
    for (int k = 0; k < deg; ++k) {
        std::vector<int> others;
        for (int i = 0; i < deg; ++i)
            if (i != k) others.push_back(i);
        long total = 1;
        for (size_t i = 0; i < others.size(); ++i) total *= q;
        for (long idx = 0; idx < total; ++idx) {
            long rest = idx;
            Symbol acc = 0;
            double prob = 1.0;
            for (int i : others) {
                const Symbol xi = Symbol(rest % q);
                rest /= q;
                acc = f.add(acc, f.mul(labels[size_t(i)], xi));
                prob *= incoming[size_t(i)][xi];
            }
            const Symbol x = f.mul(f.inv(labels[size_t(k)]), acc);
            out[size_t(k)][x] += prob;
        }
        normalize(out[size_t(k)]);
    }
    return out;
}

std::vector<double> dists_to_flat(std::span<const Dist> priors) {
    std::vector<double> flat;
    for (const Dist& d : priors) flat.insert(flat.end(), d.p.begin(), d.p.end());
    return flat;
}

}  // namespace

TEST_SUITE("qspa") {

TEST_CASE("repetition check fuses the two priors") {
    GaloisField f(2);
    Code code(f, 2, 1, {{0, 0, 1}, {0, 1, 1}});
    std::vector<Dist> priors = {Dist(std::vector<double>{0.1, 0.1, 0.1, 0.7}),
                                Dist(std::vector<double>{0.4, 0.3, 0.2, 0.1})};
    DecodeResult r = decode(code, priors);
    CHECK(r.converged);
    CHECK(!r.degenerate);
    CHECK(r.iterations_used == 1);
    CHECK(r.decided == std::vector<Symbol>{3, 3});
}

TEST_CASE("edge labels steer the repetition decision") {
    GaloisField f(2);
    // 2*c0 + 3*c1 = 0, so c1 = inv(3)*2*c0 = 3*c0.
    Code code(f, 2, 1, {{0, 0, 2}, {0, 1, 3}});
    std::vector<Dist> priors = {Dist(std::vector<double>{0.01, 0.01, 0.01, 0.97}),
                                Dist::uniform(4)};
    DecodeResult r = decode(code, priors);
    CHECK(r.converged);
    // c0 = 3 forces c1 = 3*3 = 2.
    CHECK(r.decided == std::vector<Symbol>{3, 2});
}

TEST_CASE("check update relabels a point mass exactly") {
    GaloisField f(2);
    std::vector<Symbol> labels = {2, 3};
    std::vector<Dist> incoming = {Dist::uniform(4), Dist::point_mass(4, 2)};
    std::vector<Dist> out = check_node_update(f, labels, incoming);
    // Edge 1 pins 3*c1 = 3*2 = 1, so c0 = inv(2)*1 = 3.
    for (int x = 0; x < 4; ++x)
        CHECK(out[0][x] == doctest::Approx(x == 3 ? 1.0 : 0.0).epsilon(1e-12));
    // The other direction sees the uniform message: still uniform.
    for (int x = 0; x < 4; ++x) CHECK(out[1][x] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("check update matches the exhaustive reference") {
    GaloisField f(3);
    Rng rng(0x71737061ull);
    for (int deg : {1, 2, 3, 4, 5}) {
        CAPTURE(deg);
        std::vector<Symbol> labels(static_cast<size_t>(deg));
        std::vector<Dist> incoming;
        for (int i = 0; i < deg; ++i) {
            labels[size_t(i)] = Symbol(1 + rng.below(std::uint32_t(f.q() - 1)));
            incoming.push_back(random_dist(f.q(), rng));
        }
        std::vector<Dist> fast = check_node_update(f, labels, incoming);
        std::vector<Dist> slow = check_update_brute(f, labels, incoming);
        REQUIRE(fast.size() == slow.size());
        for (int k = 0; k < deg; ++k)
            for (int x = 0; x < f.q(); ++x)
                CHECK(fast[size_t(k)][x] == doctest::Approx(slow[size_t(k)][x]).epsilon(1e-10));
    }
}

TEST_CASE("variable update multiplies all factors except the excluded one") {
    Rng rng(0x71737062ull);
    Dist prior = random_dist(8, rng);
    std::vector<Dist> incoming = {random_dist(8, rng), random_dist(8, rng)};
    Dist out = variable_node_update(prior, incoming, 1);
    Dist ref(8);
    for (int x = 0; x < 8; ++x) ref[x] = prior[x] * incoming[0][x];
    normalize(ref);
    for (int x = 0; x < 8; ++x) CHECK(out[x] == doctest::Approx(ref[x]).epsilon(1e-12));

    Dist post = variable_node_update(prior, incoming, -1);
    Dist ref2(8);
    for (int x = 0; x < 8; ++x) ref2[x] = prior[x] * incoming[0][x] * incoming[1][x];
    normalize(ref2);
    for (int x = 0; x < 8; ++x) CHECK(post[x] == doctest::Approx(ref2[x]).epsilon(1e-12));
}

TEST_CASE("binary decoding matches a plain log-domain decoder") {
    GaloisField f(1);
    Code code = peg_construct(f, DegreeProfile::regular(96, 48, 3), 17);
    Rng rng(0x71737063ull);
    const double sigma = 0.79;  // low enough that some blocks fail

    int converged_blocks = 0;
    for (int block = 0; block < 50; ++block) {
        CAPTURE(block);
        std::vector<double> llr(96);
        std::vector<double> flat(96 * 2);
        for (int j = 0; j < 96; ++j) {
            // All-zero codeword, BPSK: +1 plus noise.
            const double y = 1.0 + sigma * rng.gaussian();
            llr[size_t(j)] = 2.0 * y / (sigma * sigma);
            flat[size_t(j) * 2 + 0] = 1.0 / (1.0 + std::exp(-llr[size_t(j)]));
            flat[size_t(j) * 2 + 1] = 1.0 / (1.0 + std::exp(llr[size_t(j)]));
        }
        DecodeOptions opt;
        opt.max_iterations = 30;
        QspaDecoder dec(code);
        DecodeResult a = dec.decode(std::span<const double>(flat), opt);
        spa_ref::Result b = spa_ref::decode(code, llr, 30, true);
        REQUIRE(a.degenerate == b.degenerate);
        if (!a.degenerate) {
            CHECK(a.decided == b.decided);
            CHECK(a.converged == b.converged);
            CHECK(a.iterations_used == b.iterations_used);
        }
        converged_blocks += a.converged ? 1 : 0;
    }
    // The operating point straddles the threshold: both outcomes appear.
    CHECK(converged_blocks > 0);
    CHECK(converged_blocks < 50);
}

TEST_CASE("exact codeword priors converge immediately and stay put") {
    GaloisField f(2);
    Code code = peg_construct(f, DegreeProfile::regular(60, 24, 2), 23);
    Rng rng(0x71737064ull);
    std::vector<Symbol> info(size_t(code.k()));
    for (auto& s : info) s = Symbol(rng.below(4));
    std::vector<Symbol> cw = code.encode(info);

    std::vector<Dist> priors;
    for (Symbol s : cw) priors.push_back(Dist::point_mass(4, s));

    DecodeResult r = decode(code, priors);
    CHECK(r.converged);
    CHECK(r.iterations_used == 1);
    CHECK(r.decided == cw);

    DecodeOptions full;
    full.early_stop = false;
    full.max_iterations = 8;
    DecodeResult r2 = decode(code, priors, full);
    CHECK(r2.converged);
    CHECK(r2.iterations_used == 8);
    CHECK(r2.decided == cw);
}

TEST_CASE("relabeling variables permutes the decisions") {
    GaloisField f(3);
    DegreeProfile p = DegreeProfile::regular(40, 16, 2);
    Code code = peg_construct(f, p, 31);

    std::vector<int> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    Rng shuffle_rng(99);
    for (int i = 39; i > 0; --i)
        std::swap(perm[size_t(i)], perm[size_t(shuffle_rng.below(std::uint32_t(i + 1)))]);

    std::vector<CodeEntry> moved;
    for (const CodeEntry& e : code.edges())
        moved.push_back({e.row, perm[size_t(e.col)], e.label});
    Code code2(f, 40, 16, std::move(moved));

    Rng rng(0x71737065ull);
    std::vector<Dist> priors;
    for (int j = 0; j < 40; ++j) priors.push_back(random_dist(8, rng));
    std::vector<Dist> priors2(size_t(40), Dist(8));
    for (int j = 0; j < 40; ++j) priors2[size_t(perm[size_t(j)])] = priors[size_t(j)];

    DecodeOptions opt;
    opt.early_stop = false;
    opt.max_iterations = 5;
    DecodeResult a = decode(code, priors, opt);
    DecodeResult b = decode(code2, priors2, opt);
    CHECK(a.degenerate == b.degenerate);
    for (int j = 0; j < 40; ++j)
        CHECK(a.decided[size_t(j)] == b.decided[size_t(perm[size_t(j)])]);
}

TEST_CASE("prior scale factors cancel exactly") {
    GaloisField f(2);
    Code code = peg_construct(f, DegreeProfile::regular(50, 20, 2), 37);
    Rng rng(0x71737066ull);
    std::vector<Dist> priors;
    for (int j = 0; j < 50; ++j) priors.push_back(random_dist(4, rng));

    std::vector<Dist> scaled = priors;
    for (int j = 0; j < 50; ++j) {
        const double c = std::ldexp(1.0, (j % 7) - 3);  // powers of two scale losslessly
        for (int x = 0; x < 4; ++x) scaled[size_t(j)][x] *= c;
    }

    DecodeResult a = decode(code, priors);
    DecodeResult b = decode(code, scaled);
    CHECK(a.decided == b.decided);
    CHECK(a.converged == b.converged);
    CHECK(a.iterations_used == b.iterations_used);
}

TEST_CASE("hopeless priors are reported, not thrown") {
    GaloisField f(2);

    SUBCASE("a prior with no mass fails up front") {
        Code code(f, 2, 1, {{0, 0, 1}, {0, 1, 1}});
        std::vector<Dist> priors = {Dist(4), Dist::uniform(4)};
        DecodeResult r = decode(code, priors);
        CHECK(r.degenerate);
        CHECK(!r.converged);
        CHECK(r.iterations_used == 0);
        CHECK(r.decided.size() == 2);
    }
    SUBCASE("conflicting point masses collapse at the variable node") {
        Code code(f, 2, 1, {{0, 0, 1}, {0, 1, 1}});
        std::vector<Dist> priors = {Dist::point_mass(4, 1), Dist::point_mass(4, 2)};
        DecodeResult r = decode(code, priors);
        CHECK(r.degenerate);
        CHECK(!r.converged);
    }
}

TEST_CASE("operation counters follow the documented formulas") {
    GaloisField f(2);  // q = 4, log2 q = 2
    Code code = peg_construct(f, DegreeProfile::regular(60, 30, 3), 41);
    const std::uint64_t E = std::uint64_t(code.num_edges());
    const std::uint64_t q = 4, lg = 2, N = 60, M = 30;

    std::uint64_t check_mul_vecs = 0;
    for (const auto& ce : code.check_edges()) {
        REQUIRE(ce.size() >= 2);
        check_mul_vecs += 3 * ce.size() - 6;
    }
    std::uint64_t var_mul_vecs = 0;
    for (const auto& ve : code.var_edges()) {
        REQUIRE(ve.size() >= 1);
        var_mul_vecs += ve.size() == 1 ? 1 : 3 * ve.size() - 3;
    }

    Rng rng(0x71737067ull);
    std::vector<Dist> priors;
    for (int j = 0; j < int(N); ++j) priors.push_back(random_dist(int(q), rng));

    DecodeOptions opt;
    opt.early_stop = false;
    opt.max_iterations = 7;
    DecodeResult r = decode(code, priors, opt);
    REQUIRE(!r.degenerate);
    REQUIRE(r.iterations_used == 7);

    CHECK(r.ops.float_add == 7 * 2 * E * q * lg);
    CHECK(r.ops.gf_mul == 7 * 2 * E);
    CHECK(r.ops.float_mul == 7 * q * (check_mul_vecs + var_mul_vecs));
    CHECK(r.ops.peak_message_doubles == 2 * E * q);
    (void)M;
}

TEST_CASE("the two prior formats decode identically") {
    GaloisField f(2);
    Code code = peg_construct(f, DegreeProfile::regular(30, 12, 2), 43);
    Rng rng(0x71737068ull);
    std::vector<Dist> priors;
    for (int j = 0; j < 30; ++j) priors.push_back(random_dist(4, rng));

    QspaDecoder dec(code);
    DecodeResult a = dec.decode(priors);
    std::vector<double> flat = dists_to_flat(priors);
    DecodeResult b = dec.decode(std::span<const double>(flat));
    CHECK(a.decided == b.decided);
    CHECK(a.iterations_used == b.iterations_used);
}

}  // TEST_SUITE
