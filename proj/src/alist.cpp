#include <algorithm>
#include <bit>
#include <fstream>
#include <stdexcept>

#include "nbldpc/code.hpp"

namespace nbldpc {

namespace {

// Whitespace token stream that remembers line numbers for diagnostics.
class TokenReader {
public:
    TokenReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

    long next_int(const char* what, long lo, long hi) {
        std::string tok = next_token(what);
        size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(tok, &pos);
        } catch (const std::exception&) {
            fail(std::string("expected ") + what + ", got '" + tok + "'");
        }
        if (pos != tok.size()) fail(std::string("expected ") + what + ", got '" + tok + "'");
        if (v < lo || v > hi)
            fail(std::string(what) + " = " + tok + " out of range [" + std::to_string(lo) +
                 ", " + std::to_string(hi) + "]");
        return v;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error(name_ + ":" + std::to_string(line_) + ": " + msg);
    }

private:
    std::string next_token(const char* what) {
        std::string tok;
        while (true) {
            int ch = in_.get();
            if (ch == EOF) {
                if (tok.empty()) fail(std::string("unexpected end of file, expected ") + what);
                return tok;
            }
            if (ch == '\n') {
                if (!tok.empty()) {
                    in_.unget();
                    return tok;
                }
                ++line_;
            } else if (ch == ' ' || ch == '\t' || ch == '\r') {
                if (!tok.empty()) return tok;
            } else {
                tok.push_back(char(ch));
            }
        }
    }

    std::istream& in_;
    std::string name_;
    long line_ = 1;
};

}  // namespace

void Code::save_alist(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << n_ << ' ' << m_ << ' ' << field_.q() << '\n';
    out << max_col_weight() << ' ' << max_row_weight() << '\n';
    for (int c = 0; c < n_; ++c) out << var_edges_[size_t(c)].size() << (c + 1 < n_ ? ' ' : '\n');
    for (int r = 0; r < m_; ++r) out << check_edges_[size_t(r)].size() << (r + 1 < m_ ? ' ' : '\n');
    for (int c = 0; c < n_; ++c) {
        const auto& es = var_edges_[size_t(c)];
        for (size_t i = 0; i < es.size(); ++i) {
            const CodeEntry& e = edges_[size_t(es[i])];
            out << (e.row + 1) << ' ' << e.label << (i + 1 < es.size() ? ' ' : '\n');
        }
        if (es.empty()) out << '\n';
    }
    for (int r = 0; r < m_; ++r) {
        const auto& es = check_edges_[size_t(r)];
        for (size_t i = 0; i < es.size(); ++i) {
            const CodeEntry& e = edges_[size_t(es[i])];
            out << (e.col + 1) << ' ' << e.label << (i + 1 < es.size() ? ' ' : '\n');
        }
        if (es.empty()) out << '\n';
    }
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

Code Code::load_alist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    TokenReader tr(in, path);

    const long n = tr.next_int("column count", 1, 1 << 20);
    const long m = tr.next_int("check count", 1, 1 << 20);
    const long q = tr.next_int("field size", 2, 256);
    if (!std::has_single_bit(std::uint64_t(q)))
        tr.fail("field size " + std::to_string(q) + " is not a power of two");
    const int field_m = std::countr_zero(std::uint64_t(q));

    const long max_col = tr.next_int("max column weight", 0, m);
    const long max_row = tr.next_int("max row weight", 0, n);

    std::vector<long> col_deg(size_t(n), 0), row_deg(size_t(m), 0);
    long col_total = 0, row_total = 0;
    for (long c = 0; c < n; ++c) {
        col_deg[size_t(c)] = tr.next_int("column weight", 0, max_col);
        col_total += col_deg[size_t(c)];
    }
    for (long r = 0; r < m; ++r) {
        row_deg[size_t(r)] = tr.next_int("row weight", 0, max_row);
        row_total += row_deg[size_t(r)];
    }
    if (col_total != row_total)
        tr.fail("column weights sum to " + std::to_string(col_total) +
                " but row weights sum to " + std::to_string(row_total));

    std::vector<CodeEntry> entries;
    entries.reserve(static_cast<size_t>(col_total));
    for (long c = 0; c < n; ++c) {
        for (long i = 0; i < col_deg[size_t(c)]; ++i) {
            long row = tr.next_int("row index", 1, m);
            long label = tr.next_int("entry label", 1, q - 1);
            entries.push_back({int(row - 1), int(c), Symbol(label)});
        }
    }
    // The row-major section must agree with the column-major one.
    std::vector<std::vector<std::pair<long, long>>> from_rows;
    from_rows.resize(static_cast<size_t>(m));
    for (long r = 0; r < m; ++r) {
        for (long i = 0; i < row_deg[size_t(r)]; ++i) {
            long col = tr.next_int("column index", 1, n);
            long label = tr.next_int("entry label", 1, q - 1);
            from_rows[size_t(r)].push_back({col - 1, label});
        }
    }
    std::vector<std::vector<std::pair<long, long>>> from_cols;
    from_cols.resize(static_cast<size_t>(m));
    for (const CodeEntry& e : entries) from_cols[size_t(e.row)].push_back({e.col, e.label});
    for (long r = 0; r < m; ++r) {
        auto a = from_cols[size_t(r)];
        auto b = from_rows[size_t(r)];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b)
            throw std::runtime_error(path + ": row " + std::to_string(r + 1) +
                                     " disagrees between the column and row sections");
    }

    GaloisField field(field_m);
    try {
        return Code(field, int(n), int(m), std::move(entries));
    } catch (const std::invalid_argument& ex) {
        throw std::runtime_error(path + ": " + ex.what());
    }
}

}  // namespace nbldpc
