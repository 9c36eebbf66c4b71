#include "nbldpc/code.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace nbldpc {

DegreeProfile DegreeProfile::regular(int n_cols, int n_checks, int weight) {
    return mixed(n_cols, n_checks, {{weight, 1.0}});
}

DegreeProfile DegreeProfile::mixed(int n_cols, int n_checks,
                                   std::vector<std::pair<int, double>> wf) {
    DegreeProfile p;
    p.n_cols = n_cols;
    p.n_checks = n_checks;
    p.weight_fractions = std::move(wf);
    if (n_cols < 1 || n_checks < 1)
        throw std::invalid_argument("degree profile: need at least one column and one check");
    double total = 0.0;
    for (auto& [w, f] : p.weight_fractions) {
        if (w < 1 || w > n_checks)
            throw std::invalid_argument("degree profile: column weight out of range");
        if (f < 0.0) throw std::invalid_argument("degree profile: negative fraction");
        total += f;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("degree profile: fractions must sum to 1");
    return p;
}

std::vector<int> DegreeProfile::column_weights() const {
    // Largest-remainder apportionment so counts are exact and deterministic.
    struct Share {
        int weight;
        int count;
        double rem;
    };
    std::vector<Share> shares;
    int assigned = 0;
    for (auto& [w, f] : weight_fractions) {
        double exact = f * n_cols;
        int c = int(std::floor(exact + 1e-9));
        shares.push_back({w, c, exact - c});
        assigned += c;
    }
    std::stable_sort(shares.begin(), shares.end(), [](const Share& a, const Share& b) {
        return a.rem > b.rem;
    });
    for (int i = 0; assigned < n_cols; ++i, ++assigned) shares[i % shares.size()].count++;

    std::vector<int> weights;
    weights.reserve(static_cast<size_t>(n_cols));
    for (auto& s : shares)
        for (int i = 0; i < s.count; ++i) weights.push_back(s.weight);
    std::sort(weights.begin(), weights.end());
    if (int(weights.size()) != n_cols)
        throw std::logic_error("degree profile: realization mismatch");
    return weights;
}

Code::Code(GaloisField field, int n, int m_checks, std::vector<CodeEntry> entries)
    : field_(field), n_(n), m_(m_checks), edges_(std::move(entries)) {
    if (n_ < 1 || m_ < 1) throw std::invalid_argument("code: need n >= 1 and checks >= 1");
    std::sort(edges_.begin(), edges_.end(), [](const CodeEntry& a, const CodeEntry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (size_t i = 0; i < edges_.size(); ++i) {
        const CodeEntry& e = edges_[i];
        if (e.row < 0 || e.row >= m_ || e.col < 0 || e.col >= n_)
            throw std::invalid_argument("code: entry index out of range");
        if (e.label == 0 || e.label >= field_.q())
            throw std::invalid_argument("code: entry label must be a nonzero field element");
        if (i > 0 && edges_[i - 1].row == e.row && edges_[i - 1].col == e.col)
            throw std::invalid_argument("code: duplicate entry (parallel edge)");
    }
    build_adjacency();
    build_encoder();
}

void Code::build_adjacency() {
    check_edges_.assign(size_t(m_), {});
    var_edges_.assign(size_t(n_), {});
    for (int e = 0; e < int(edges_.size()); ++e) {
        check_edges_[size_t(edges_[size_t(e)].row)].push_back(e);
        var_edges_[size_t(edges_[size_t(e)].col)].push_back(e);
    }
    // Edges are sorted by (row, col), so per-check lists are already in
    // ascending column order and per-variable lists in ascending row order.
}

double Code::rate_lower_bound() const { return 1.0 - double(m_) / double(n_); }

double Code::avg_row_weight() const { return double(edges_.size()) / double(m_); }
double Code::avg_col_weight() const { return double(edges_.size()) / double(n_); }

int Code::max_row_weight() const {
    size_t best = 0;
    for (auto& v : check_edges_) best = std::max(best, v.size());
    return int(best);
}

int Code::max_col_weight() const {
    size_t best = 0;
    for (auto& v : var_edges_) best = std::max(best, v.size());
    return int(best);
}

void Code::build_encoder() {
    std::vector<char> is_pivot(size_t(n_), 0);
    std::vector<int> pivot_row_of_col(size_t(n_), -1);

    if (field_.q() == 2) {
        const int words = (n_ + 63) / 64;
        std::vector<std::vector<std::uint64_t>> rows(size_t(m_),
                                                     std::vector<std::uint64_t>(size_t(words), 0));
        for (const CodeEntry& e : edges_)
            rows[size_t(e.row)][size_t(e.col >> 6)] |= std::uint64_t(1) << (e.col & 63);

        std::vector<char> row_used(size_t(m_), 0);
        for (int col = n_ - 1; col >= 0; --col) {
            int prow = -1;
            for (int r = 0; r < m_; ++r) {
                if (!row_used[size_t(r)] &&
                    (rows[size_t(r)][size_t(col >> 6)] >> (col & 63)) & 1) {
                    prow = r;
                    break;
                }
            }
            if (prow < 0) continue;
            row_used[size_t(prow)] = 1;
            is_pivot[size_t(col)] = 1;
            pivot_row_of_col[size_t(col)] = prow;
            for (int r = 0; r < m_; ++r) {
                if (r == prow) continue;
                if ((rows[size_t(r)][size_t(col >> 6)] >> (col & 63)) & 1) {
                    const std::uint64_t* src = rows[size_t(prow)].data();
                    std::uint64_t* dst = rows[size_t(r)].data();
                    for (int w = 0; w < words; ++w) dst[w] ^= src[w];
                }
            }
        }
        for (int c = 0; c < n_; ++c)
            (is_pivot[size_t(c)] ? parity_cols_ : info_cols_).push_back(c);
        rank_ = int(parity_cols_.size());

        const int kwords = (k() + 63) / 64;
        parity_bits_.assign(parity_cols_.size(),
                            std::vector<std::uint64_t>(size_t(kwords), 0));
        for (size_t pi = 0; pi < parity_cols_.size(); ++pi) {
            int prow = pivot_row_of_col[size_t(parity_cols_[pi])];
            for (size_t j = 0; j < info_cols_.size(); ++j) {
                int c = info_cols_[j];
                if ((rows[size_t(prow)][size_t(c >> 6)] >> (c & 63)) & 1)
                    parity_bits_[pi][j >> 6] |= std::uint64_t(1) << (j & 63);
            }
        }
    } else {
        std::vector<std::vector<Symbol>> rows(size_t(m_), std::vector<Symbol>(size_t(n_), 0));
        for (const CodeEntry& e : edges_) rows[size_t(e.row)][size_t(e.col)] = e.label;

        std::vector<char> row_used(size_t(m_), 0);
        for (int col = n_ - 1; col >= 0; --col) {
            int prow = -1;
            for (int r = 0; r < m_; ++r) {
                if (!row_used[size_t(r)] && rows[size_t(r)][size_t(col)] != 0) {
                    prow = r;
                    break;
                }
            }
            if (prow < 0) continue;
            row_used[size_t(prow)] = 1;
            is_pivot[size_t(col)] = 1;
            pivot_row_of_col[size_t(col)] = prow;

            Symbol* pr = rows[size_t(prow)].data();
            Symbol scale = field_.inv(pr[col]);
            if (scale != 1)
                for (int c = 0; c < n_; ++c)
                    if (pr[c]) pr[c] = field_.mul(pr[c], scale);
            for (int r = 0; r < m_; ++r) {
                if (r == prow) continue;
                Symbol f = rows[size_t(r)][size_t(col)];
                if (f == 0) continue;
                Symbol* dst = rows[size_t(r)].data();
                for (int c = 0; c < n_; ++c)
                    if (pr[c]) dst[c] ^= field_.mul(f, pr[c]);
            }
        }
        for (int c = 0; c < n_; ++c)
            (is_pivot[size_t(c)] ? parity_cols_ : info_cols_).push_back(c);
        rank_ = int(parity_cols_.size());

        parity_coef_.assign(parity_cols_.size(), std::vector<Symbol>(info_cols_.size(), 0));
        for (size_t pi = 0; pi < parity_cols_.size(); ++pi) {
            int prow = pivot_row_of_col[size_t(parity_cols_[pi])];
            for (size_t j = 0; j < info_cols_.size(); ++j)
                parity_coef_[pi][j] = rows[size_t(prow)][size_t(info_cols_[j])];
        }
    }

    if (rank_deficient())
        std::cerr << "warning: parity-check matrix has rank " << rank_ << " < " << m_
                  << " checks; dimension raised to " << k() << "\n";
}

std::vector<Symbol> Code::syndrome(std::span<const Symbol> word) const {
    if (int(word.size()) != n_) throw std::invalid_argument("syndrome: word length mismatch");
    std::vector<Symbol> s(size_t(m_), 0);
    for (const CodeEntry& e : edges_)
        s[size_t(e.row)] ^= field_.mul(e.label, word[size_t(e.col)]);
    return s;
}

bool Code::in_codespace(std::span<const Symbol> word) const {
    auto s = syndrome(word);
    return std::all_of(s.begin(), s.end(), [](Symbol x) { return x == 0; });
}

std::vector<Symbol> Code::encode(std::span<const Symbol> info) const {
    if (int(info.size()) != k()) throw std::invalid_argument("encode: expected k info symbols");
    std::vector<Symbol> word(size_t(n_), 0);
    for (size_t j = 0; j < info_cols_.size(); ++j) {
        if (info[j] >= field_.q())
            throw std::invalid_argument("encode: info symbol outside the field");
        word[size_t(info_cols_[j])] = info[j];
    }
    if (field_.q() == 2) {
        const int kwords = (k() + 63) / 64;
        std::vector<std::uint64_t> packed(size_t(kwords), 0);
        for (size_t j = 0; j < info_cols_.size(); ++j)
            if (info[j]) packed[j >> 6] |= std::uint64_t(1) << (j & 63);
        for (size_t pi = 0; pi < parity_cols_.size(); ++pi) {
            std::uint64_t acc = 0;
            const std::uint64_t* coef = parity_bits_[pi].data();
            for (int w = 0; w < kwords; ++w) acc ^= coef[w] & packed[size_t(w)];
            word[size_t(parity_cols_[pi])] = Symbol(__builtin_parityll(acc));
        }
    } else {
        for (size_t pi = 0; pi < parity_cols_.size(); ++pi) {
            Symbol acc = 0;
            const std::vector<Symbol>& coef = parity_coef_[pi];
            for (size_t j = 0; j < coef.size(); ++j)
                if (coef[j] && info[j]) acc ^= field_.mul(coef[j], info[j]);
            word[size_t(parity_cols_[pi])] = acc;
        }
    }
    return word;
}

std::optional<int> Code::girth() const {
    // Nodes: variables [0, n), checks [n, n + m). BFS from every variable;
    // a non-tree edge seen from both sides closes a shortest cycle.
    const size_t total = size_t(n_) + size_t(m_);
    std::vector<int> dist(total, 0);
    std::vector<int> via(total, -1);
    std::vector<int> stamp(total, -1);
    std::vector<int> queue;
    int best = INT_MAX;

    auto neighbors = [&](int node) -> const std::vector<int>& {
        return node < n_ ? var_edges_[size_t(node)] : check_edges_[size_t(node - n_)];
    };
    auto other_end = [&](int e, int node) {
        const CodeEntry& ed = edges_[size_t(e)];
        return node < n_ ? n_ + ed.row : ed.col;
    };

    for (int s = 0; s < n_; ++s) {
        queue.clear();
        queue.push_back(s);
        stamp[size_t(s)] = s;
        dist[size_t(s)] = 0;
        via[size_t(s)] = -1;
        for (size_t head = 0; head < queue.size(); ++head) {
            int u = queue[head];
            if (2 * dist[size_t(u)] + 1 >= best) break;
            for (int e : neighbors(u)) {
                if (e == via[size_t(u)]) continue;
                int v = other_end(e, u);
                if (stamp[size_t(v)] != s) {
                    stamp[size_t(v)] = s;
                    dist[size_t(v)] = dist[size_t(u)] + 1;
                    via[size_t(v)] = e;
                    queue.push_back(v);
                } else if (via[size_t(v)] != e) {
                    best = std::min(best, dist[size_t(u)] + dist[size_t(v)] + 1);
                }
            }
        }
    }
    if (best == INT_MAX) return std::nullopt;
    return best;
}

}  // namespace nbldpc
