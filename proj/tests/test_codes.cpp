#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "nbldpc/code.hpp"
#include "nbldpc/rng.hpp"

using namespace nbldpc;

namespace {

std::string temp_path(const char* name) {
    const char* base = std::getenv("NBLDPC_TMP");
    std::string dir = base ? base : "/tmp";
    std::filesystem::create_directories(dir);
    return dir + "/" + name;
}

std::vector<Symbol> random_info(const Code& code, Rng& rng) {
    std::vector<Symbol> info(size_t(code.k()));
    for (auto& s : info) s = Symbol(rng.below(std::uint32_t(code.field().q())));
    return info;
}

}  // namespace

TEST_SUITE("codes") {

TEST_CASE("degree profiles realize exact column counts") {
    DegreeProfile p = DegreeProfile::mixed(2000, 600, {{2, 0.75}, {3, 0.25}});
    std::vector<int> w = p.column_weights();
    REQUIRE(w.size() == 2000);
    CHECK(std::is_sorted(w.begin(), w.end()));
    CHECK(std::count(w.begin(), w.end(), 2) == 1500);
    CHECK(std::count(w.begin(), w.end(), 3) == 500);

    DegreeProfile r = DegreeProfile::regular(100, 50, 3);
    std::vector<int> wr = r.column_weights();
    CHECK(std::count(wr.begin(), wr.end(), 3) == 100);
}

TEST_CASE("fractions that do not divide evenly still sum to n") {
    DegreeProfile p = DegreeProfile::mixed(1000, 300, {{2, 1.0 / 3.0}, {3, 2.0 / 3.0}});
    std::vector<int> w = p.column_weights();
    REQUIRE(w.size() == 1000);
    long total = 0;
    for (int x : w) total += x;
    // Largest-remainder rounding: 333 or 334 twos, the rest threes.
    const long twos = std::count(w.begin(), w.end(), 2);
    CHECK(twos + std::count(w.begin(), w.end(), 3) == 1000);
    CHECK((twos == 333 || twos == 334));
    CHECK(total == 2 * twos + 3 * (1000 - twos));
}

TEST_CASE("construction is deterministic in the seed") {
    GaloisField f(4);
    DegreeProfile p = DegreeProfile::regular(120, 60, 2);
    Code a = peg_construct(f, p, 42);
    Code b = peg_construct(f, p, 42);
    REQUIRE(a.num_edges() == b.num_edges());
    for (int e = 0; e < a.num_edges(); ++e) {
        CHECK(a.edges()[size_t(e)].row == b.edges()[size_t(e)].row);
        CHECK(a.edges()[size_t(e)].col == b.edges()[size_t(e)].col);
        CHECK(a.edges()[size_t(e)].label == b.edges()[size_t(e)].label);
    }
    Code c = peg_construct(f, p, 43);
    bool same = a.num_edges() == c.num_edges();
    if (same) {
        same = false;
        for (int e = 0; e < a.num_edges() && !same; ++e)
            if (a.edges()[size_t(e)].row != c.edges()[size_t(e)].row ||
                a.edges()[size_t(e)].label != c.edges()[size_t(e)].label)
                same = true;
        same = !same;
    }
    CHECK(!same);
}

TEST_CASE("construction realizes the profile without parallel edges") {
    GaloisField f(3);
    DegreeProfile p = DegreeProfile::mixed(400, 120, {{2, 0.75}, {3, 0.25}});
    Code code = peg_construct(f, p, 7);
    CHECK(code.n() == 400);
    CHECK(code.m_checks() == 120);

    std::vector<int> want = p.column_weights();
    std::set<std::pair<int, int>> seen;
    std::vector<int> col_deg(400, 0);
    for (const CodeEntry& e : code.edges()) {
        CHECK(e.label >= 1);
        CHECK(e.label < f.q());
        CHECK(seen.insert({e.row, e.col}).second);  // no parallel edges
        ++col_deg[size_t(e.col)];
    }
    std::sort(col_deg.begin(), col_deg.end());
    CHECK(col_deg == want);

    // Check degrees stay within one of each other (greedy lowest-degree fill).
    std::vector<int> row_deg(120, 0);
    for (const CodeEntry& e : code.edges()) ++row_deg[size_t(e.row)];
    const auto [lo, hi] = std::minmax_element(row_deg.begin(), row_deg.end());
    CHECK(*hi - *lo <= 1);
}

TEST_CASE("construction avoids short cycles when the graph is sparse enough") {
    GaloisField f(6);
    Code code = peg_construct(f, DegreeProfile::regular(500, 100, 2), 11);
    REQUIRE(code.girth().has_value());
    CHECK(*code.girth() >= 6);
}

TEST_CASE("girth finds a planted 4-cycle") {
    GaloisField f(2);
    // Two variables sharing two checks: the shortest possible cycle.
    std::vector<CodeEntry> entries = {
        {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}, {2, 2, 1}};
    Code code(f, 3, 3, entries);
    REQUIRE(code.girth().has_value());
    CHECK(*code.girth() == 4);
}

TEST_CASE("a tree graph has no cycle") {
    GaloisField f(2);
    std::vector<CodeEntry> entries = {{0, 0, 1}, {0, 1, 1}, {1, 1, 1}, {1, 2, 1}};
    Code code(f, 3, 2, entries);
    CHECK(!code.girth().has_value());
}

TEST_CASE("hand-checked encoder over GF(4)") {
    GaloisField f(2);
    // One check: 2*c0 + 3*c1 = 0. Pivot is chosen from the right, so c1 is
    // the parity position and c0 carries information.
    std::vector<CodeEntry> entries = {{0, 0, 2}, {0, 1, 3}};
    Code code(f, 2, 1, entries);
    CHECK(code.rank() == 1);
    CHECK(code.k() == 1);
    REQUIRE(code.info_cols() == std::vector<int>{0});
    std::vector<Symbol> info = {3};
    std::vector<Symbol> cw = code.encode(info);
    // 2*3 = 1, so c1 = 1 / 3 = inv(3) = 2.
    CHECK(cw == std::vector<Symbol>{3, 2});
    CHECK(code.in_codespace(cw));
}

TEST_CASE("encoding always lands in the codespace") {
    struct Setup {
        int m;
        int n, checks, w;
    };
    for (Setup s : {Setup{2, 60, 24, 2}, Setup{4, 80, 20, 3}, Setup{1, 120, 36, 3}}) {
        CAPTURE(s.m);
        GaloisField f(s.m);
        Code code = peg_construct(f, DegreeProfile::regular(s.n, s.checks, s.w), 5);
        Rng rng(0x636f646572ull + unsigned(s.m));
        for (int t = 0; t < 1000; ++t) {
            std::vector<Symbol> cw = code.encode(random_info(code, rng));
            if (!code.in_codespace(cw)) {
                REQUIRE(code.in_codespace(cw));  // print one failure, not 1000
            }
        }
        CHECK(code.rate() >= code.rate_lower_bound() - 1e-12);
    }
}

TEST_CASE("rank deficiency raises the dimension") {
    GaloisField f(2);
    // Duplicate rows: rank 1, so k = n - 1 even though there are two checks.
    std::vector<CodeEntry> entries = {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}};
    Code code(f, 2, 2, entries);
    CHECK(code.rank() == 1);
    CHECK(code.k() == 1);
    CHECK(code.rank_deficient());
    std::vector<Symbol> cw = code.encode(std::vector<Symbol>{1});
    CHECK(code.in_codespace(cw));
}

TEST_CASE("adjacency lists are ordered and consistent") {
    GaloisField f(4);
    Code code = peg_construct(f, DegreeProfile::regular(200, 80, 3), 3);
    REQUIRE(int(code.var_edges().size()) == code.n());
    REQUIRE(int(code.check_edges().size()) == code.m_checks());
    int count = 0;
    for (int j = 0; j < code.n(); ++j) {
        int prev = -1;
        for (int e : code.var_edges()[size_t(j)]) {
            CHECK(code.edges()[size_t(e)].col == j);
            CHECK(code.edges()[size_t(e)].row > prev);
            prev = code.edges()[size_t(e)].row;
            ++count;
        }
    }
    CHECK(count == code.num_edges());
    for (int i = 0; i < code.m_checks(); ++i) {
        int prev = -1;
        for (int e : code.check_edges()[size_t(i)]) {
            CHECK(code.edges()[size_t(e)].row == i);
            CHECK(code.edges()[size_t(e)].col > prev);
            prev = code.edges()[size_t(e)].col;
        }
    }
}

TEST_CASE("matrix files round-trip byte for byte") {
    GaloisField f(4);
    Code code = peg_construct(f, DegreeProfile::mixed(150, 45, {{2, 0.75}, {3, 0.25}}), 9);
    const std::string p1 = temp_path("roundtrip1.alist");
    const std::string p2 = temp_path("roundtrip2.alist");
    code.save_alist(p1);
    Code loaded = Code::load_alist(p1);
    CHECK(loaded.n() == code.n());
    CHECK(loaded.m_checks() == code.m_checks());
    CHECK(loaded.field().q() == code.field().q());
    CHECK(loaded.k() == code.k());
    loaded.save_alist(p2);
    std::ifstream a(p1, std::ios::binary), b(p2, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(!sa.empty());
}

TEST_CASE("malformed matrix files fail with the offending line") {
    auto write_and_load = [](const char* name, const std::string& text) {
        const std::string p = temp_path(name);
        std::ofstream(p) << text;
        return p;
    };

    SUBCASE("label out of range") {
        const std::string p = write_and_load("bad_label.alist",
                                             "2 1 4\n1 2\n1 1\n2\n1 4\n1 1\n1 1 2 1\n");
        CHECK_THROWS_WITH_AS(Code::load_alist(p), doctest::Contains("5"),
                             std::runtime_error);
    }
    SUBCASE("truncated file") {
        const std::string p = write_and_load("trunc.alist", "2 1 4\n1 2\n1 1\n2\n1 1\n");
        CHECK_THROWS_AS(Code::load_alist(p), std::runtime_error);
    }
    SUBCASE("q not a power of two") {
        const std::string p = write_and_load("badq.alist", "2 1 3\n1 2\n1 1\n2\n");
        CHECK_THROWS_AS(Code::load_alist(p), std::runtime_error);
    }
    SUBCASE("row and column sections disagree") {
        const std::string p = write_and_load(
            "mismatch.alist", "2 1 4\n1 2\n1 1\n2\n1 1\n1 2\n1 1 2 3\n");
        CHECK_THROWS_AS(Code::load_alist(p), std::runtime_error);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(Code::load_alist(temp_path("no_such_file.alist")),
                        std::runtime_error);
    }
}

TEST_CASE("entries are validated on construction") {
    GaloisField f(2);
    CHECK_THROWS_AS(Code(f, 2, 1, {{0, 0, 1}, {0, 0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(Code(f, 2, 1, {{0, 2, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(Code(f, 2, 1, {{1, 0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(Code(f, 2, 1, {{0, 0, 0}}), std::invalid_argument);
}

}  // TEST_SUITE
