#include <algorithm>
#include <stdexcept>
#include <vector>

#include "nbldpc/code.hpp"
#include "nbldpc/rng.hpp"

namespace nbldpc {

namespace {

// Scratch for repeated BFS passes without clearing, via generation stamps.
struct PegState {
    int n, m;
    std::vector<std::vector<int>> var_checks;
    std::vector<std::vector<int>> check_vars;
    std::vector<int> check_deg;
    std::vector<int> var_stamp, chk_stamp;
    std::vector<int> frontier, next_frontier, layer;
    int gen = 0;

    PegState(int n_, int m_)
        : n(n_), m(m_), var_checks(static_cast<size_t>(n_)), check_vars(static_cast<size_t>(m_)),
          check_deg(size_t(m_), 0), var_stamp(size_t(n_), -1), chk_stamp(size_t(m_), -1) {}
};

// Expands the subtree rooted at variable j over the current graph.
// On return `reached` holds the stamp generation; `deepest` holds the checks
// discovered by the last expansion that found any, and the return value says
// whether every check was reached.
bool grow_subtree(PegState& st, int j, std::vector<int>& deepest) {
    const int g = ++st.gen;
    int reached = 0;
    st.frontier.clear();
    st.frontier.push_back(j);
    st.var_stamp[size_t(j)] = g;
    deepest.clear();

    while (true) {
        st.layer.clear();
        for (int v : st.frontier)
            for (int c : st.var_checks[size_t(v)])
                if (st.chk_stamp[size_t(c)] != g) {
                    st.chk_stamp[size_t(c)] = g;
                    st.layer.push_back(c);
                }
        if (st.layer.empty()) return false;  // saturated short of all checks
        reached += int(st.layer.size());
        deepest = st.layer;
        if (reached == st.m) return true;

        st.next_frontier.clear();
        for (int c : st.layer)
            for (int v : st.check_vars[size_t(c)])
                if (st.var_stamp[size_t(v)] != g) {
                    st.var_stamp[size_t(v)] = g;
                    st.next_frontier.push_back(v);
                }
        if (st.next_frontier.empty()) return false;
        st.frontier.swap(st.next_frontier);
    }
}

int pick_lowest_degree(const PegState& st, const std::vector<int>& candidates, Rng& rng) {
    int best_deg = st.n + 1;  // a check's degree never exceeds n
    for (int c : candidates) best_deg = std::min(best_deg, st.check_deg[size_t(c)]);
    std::vector<int> tied;
    for (int c : candidates)
        if (st.check_deg[size_t(c)] == best_deg) tied.push_back(c);
    std::sort(tied.begin(), tied.end());
    if (tied.size() == 1) return tied[0];
    return tied[size_t(rng.below(std::uint32_t(tied.size())))];
}

}  // namespace

Code peg_construct(const GaloisField& field, const DegreeProfile& profile,
                   std::uint64_t seed) {
    const int n = profile.n_cols, m = profile.n_checks;
    std::vector<int> weights = profile.column_weights();

    PegState st(n, m);
    Rng rng(seed);
    std::vector<CodeEntry> entries;
    std::vector<int> deepest, candidates;

    for (int j = 0; j < n; ++j) {
        for (int t = 0; t < weights[size_t(j)]; ++t) {
            bool all_reached = grow_subtree(st, j, deepest);
            candidates.clear();
            if (!all_reached) {
                const int g = st.gen;
                for (int c = 0; c < m; ++c)
                    if (st.chk_stamp[size_t(c)] != g) candidates.push_back(c);
            } else {
                // Every check is inside the subtree; fall back to the
                // deepest layer (never a direct neighbor of j).
                candidates = deepest;
            }
            if (candidates.empty())
                throw std::runtime_error("peg: no admissible check for a new edge");
            int c = pick_lowest_degree(st, candidates, rng);
            st.var_checks[size_t(j)].push_back(c);
            st.check_vars[size_t(c)].push_back(j);
            st.check_deg[size_t(c)]++;
            Symbol label = Symbol(1 + rng.below(std::uint32_t(field.q() - 1)));
            entries.push_back({c, j, label});
        }
    }
    return Code(field, n, m, std::move(entries));
}

}  // namespace nbldpc
