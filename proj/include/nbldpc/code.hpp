#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nbldpc/galois.hpp"

namespace nbldpc {

struct CodeEntry {
    int row = 0;
    int col = 0;
    Symbol label = 0;
};

// Column-weight recipe for code construction: fractions of columns per
// weight, realized into exact per-column counts (largest remainder).
struct DegreeProfile {
    int n_cols = 0;
    int n_checks = 0;
    std::vector<std::pair<int, double>> weight_fractions;  // (weight, fraction)

    static DegreeProfile regular(int n_cols, int n_checks, int weight);
    static DegreeProfile mixed(int n_cols, int n_checks,
                               std::vector<std::pair<int, double>> wf);

    // Per-column weights in non-decreasing order; counts sum to n_cols.
    std::vector<int> column_weights() const;
};

// Sparse parity-check matrix over GF(q) with labeled Tanner-graph adjacency
// and a precomputed systematic encoder (Gauss-Jordan elimination; pivot
// columns are chosen from the right, so information symbols occupy the
// leftmost non-pivot positions).
class Code {
public:
    Code(GaloisField field, int n, int m_checks, std::vector<CodeEntry> entries);

    const GaloisField& field() const { return field_; }
    int n() const { return n_; }
    int m_checks() const { return m_; }
    int num_edges() const { return int(edges_.size()); }

    int rank() const { return rank_; }
    int k() const { return n_ - rank_; }
    bool rank_deficient() const { return rank_ < m_; }
    double rate() const { return double(k()) / double(n_); }
    // 1 - avg column weight / avg row weight; rate() never falls below this.
    double rate_lower_bound() const;

    double avg_row_weight() const;
    double avg_col_weight() const;
    int max_row_weight() const;
    int max_col_weight() const;

    const std::vector<CodeEntry>& edges() const { return edges_; }
    // Edge ids per check, in ascending column order.
    const std::vector<std::vector<int>>& check_edges() const { return check_edges_; }
    // Edge ids per variable, in ascending row order.
    const std::vector<std::vector<int>>& var_edges() const { return var_edges_; }

    // Information-symbol positions (non-pivot columns, ascending).
    const std::vector<int>& info_cols() const { return info_cols_; }
    const std::vector<int>& parity_cols() const { return parity_cols_; }

    std::vector<Symbol> syndrome(std::span<const Symbol> word) const;
    bool in_codespace(std::span<const Symbol> word) const;

    // info.size() == k(); returns a codeword with info at info_cols().
    std::vector<Symbol> encode(std::span<const Symbol> info) const;

    // Length of the shortest Tanner-graph cycle; nullopt if acyclic.
    std::optional<int> girth() const;

    void save_alist(const std::string& path) const;
    static Code load_alist(const std::string& path);

private:
    void build_adjacency();
    void build_encoder();

    GaloisField field_;
    int n_ = 0;
    int m_ = 0;
    std::vector<CodeEntry> edges_;
    std::vector<std::vector<int>> check_edges_;
    std::vector<std::vector<int>> var_edges_;

    int rank_ = 0;
    std::vector<int> info_cols_;
    std::vector<int> parity_cols_;
    // Row r of the reduced system: parity_cols_[r] = sum_j coef[r][j] * info[j].
    // Dense over GF(q) for q > 2, bit-packed for q == 2.
    std::vector<std::vector<Symbol>> parity_coef_;
    std::vector<std::vector<std::uint64_t>> parity_bits_;
};

// Progressive edge-growth construction: columns are processed in
// non-decreasing weight order; every new edge goes to a check outside the
// variable's current subtree if one exists (lowest degree, seeded uniform
// tie-break), otherwise to a deepest such check. Labels are uniform over
// the nonzero field elements. Deterministic given (profile, seed).
Code peg_construct(const GaloisField& field, const DegreeProfile& profile,
                   std::uint64_t seed);

}  // namespace nbldpc
