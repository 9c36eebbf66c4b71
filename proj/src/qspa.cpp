#include "nbldpc/qspa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nbldpc {

QspaDecoder::QspaDecoder(const Code& code) : code_(&code) {
    const GaloisField& f = code.field();
    q_ = f.q();
    logq_ = f.m();
    n_ = code.n();
    m_ = code.m_checks();
    e_ = code.num_edges();

    perm_.resize(size_t(q_) * size_t(q_));
    for (int h = 1; h < q_; ++h)
        for (int x = 0; x < q_; ++x)
            perm_[size_t(h) * size_t(q_) + size_t(x)] = f.mul(Symbol(h), Symbol(x));

    edge_var_.resize(static_cast<size_t>(e_));
    edge_label_.resize(static_cast<size_t>(e_));
    for (int e = 0; e < e_; ++e) {
        edge_var_[size_t(e)] = code.edges()[size_t(e)].col;
        edge_label_[size_t(e)] = code.edges()[size_t(e)].label;
    }

    max_check_deg_ = std::max(code.max_row_weight(), 1);
    max_var_deg_ = std::max(code.max_col_weight(), 1);

    qmsg_.resize(size_t(e_) * size_t(q_));
    rmsg_.resize(size_t(e_) * size_t(q_));
    prior_.resize(size_t(n_) * size_t(q_));
    post_.resize(static_cast<size_t>(q_));
    spec_.resize(size_t(max_check_deg_) * size_t(q_));
    fwd_.resize(size_t(std::max(max_check_deg_, max_var_deg_ + 1)) * size_t(q_));
    bacc_.resize(static_cast<size_t>(q_));
    tbuf_.resize(static_cast<size_t>(q_));
    decided_.resize(static_cast<size_t>(n_));
    synd_.resize(static_cast<size_t>(m_));
}

bool QspaDecoder::normalize_into(double* dst, const double* src) {
    double sum = 0.0;
    for (int x = 0; x < q_; ++x) {
        double v = src[x] < 0.0 ? 0.0 : src[x];
        dst[x] = v;
        sum += v;
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) return false;
    const double inv = 1.0 / sum;
    for (int x = 0; x < q_; ++x) dst[x] *= inv;
    return true;
}

void QspaDecoder::check_pass(DecodeResult& res) {
    const auto& checks = code_->check_edges();
    const std::uint64_t qm = std::uint64_t(q_) * std::uint64_t(logq_);

    for (int i = 0; i < m_ && !res.degenerate; ++i) {
        const std::vector<int>& eids = checks[size_t(i)];
        const int deg = int(eids.size());
        if (deg == 0) continue;

        // Incoming messages seen through their labels, in the spectral domain.
        for (int k = 0; k < deg; ++k) {
            const int e = eids[size_t(k)];
            const double* src = &qmsg_[size_t(e) * size_t(q_)];
            double* dst = &spec_[size_t(k) * size_t(q_)];
            const Symbol* pr = &perm_[size_t(edge_label_[size_t(e)]) * size_t(q_)];
            for (int x = 0; x < q_; ++x) dst[pr[x]] = src[x];
            wht_inplace({dst, size_t(q_)});
            res.ops.gf_mul += 1;
            res.ops.float_add += qm;
        }

        // Forward partial spectral products fwd_[k] = spec_[0] * ... * spec_[k].
        if (deg >= 2) {
            std::copy_n(&spec_[0], q_, &fwd_[0]);
            for (int k = 1; k <= deg - 2; ++k) {
                const double* a = &fwd_[size_t(k - 1) * size_t(q_)];
                const double* b = &spec_[size_t(k) * size_t(q_)];
                double* dst = &fwd_[size_t(k) * size_t(q_)];
                for (int x = 0; x < q_; ++x) dst[x] = a[x] * b[x];
                res.ops.float_mul += std::uint64_t(q_);
            }
        }

        // Backward sweep: emit each edge from fwd x bacc, then fold its own
        // spectrum into bacc. No divisions anywhere.
        for (int k = deg - 1; k >= 0; --k) {
            if (deg == 1) {
                std::fill_n(tbuf_.data(), q_, 1.0);  // empty product: point mass at 0
            } else if (k == deg - 1) {
                std::copy_n(&fwd_[size_t(deg - 2) * size_t(q_)], q_, tbuf_.data());
            } else if (k == 0) {
                std::copy_n(bacc_.data(), q_, tbuf_.data());
            } else {
                const double* a = &fwd_[size_t(k - 1) * size_t(q_)];
                for (int x = 0; x < q_; ++x) tbuf_[size_t(x)] = a[x] * bacc_[size_t(x)];
                res.ops.float_mul += std::uint64_t(q_);
            }
            wht_inplace({tbuf_.data(), size_t(q_)});
            res.ops.float_add += qm;

            // Read out through the label: R[x] = conv[label * x]; the 1/q of
            // the inverse transform is absorbed by the normalization.
            const int e = eids[size_t(k)];
            const Symbol* pr = &perm_[size_t(edge_label_[size_t(e)]) * size_t(q_)];
            double* out = &rmsg_[size_t(e) * size_t(q_)];
            for (int x = 0; x < q_; ++x) out[x] = tbuf_[pr[x]];
            res.ops.gf_mul += 1;
            if (!normalize_into(out, out)) {
                res.degenerate = true;
                return;
            }

            if (k > 0) {
                const double* s = &spec_[size_t(k) * size_t(q_)];
                if (k == deg - 1) {
                    std::copy_n(s, q_, bacc_.data());
                } else {
                    for (int x = 0; x < q_; ++x) bacc_[size_t(x)] *= s[x];
                    res.ops.float_mul += std::uint64_t(q_);
                }
            }
        }
    }
}

bool QspaDecoder::variable_pass(DecodeResult& res) {
    const auto& vars = code_->var_edges();
    for (int j = 0; j < n_; ++j) {
        const std::vector<int>& eids = vars[size_t(j)];
        const int deg = int(eids.size());
        const double* prior = &prior_[size_t(j) * size_t(q_)];

        // Forward chain over [prior, R_0, ..., R_{deg-1}].
        std::copy_n(prior, q_, &fwd_[0]);
        for (int t = 0; t < deg; ++t) {
            const double* a = &fwd_[size_t(t) * size_t(q_)];
            const double* r = &rmsg_[size_t(eids[size_t(t)]) * size_t(q_)];
            double* dst = &fwd_[size_t(t + 1) * size_t(q_)];
            for (int x = 0; x < q_; ++x) dst[x] = a[x] * r[x];
            res.ops.float_mul += std::uint64_t(q_);
        }

        // Posterior decision (argmax, ties to the smallest field value).
        const double* post = &fwd_[size_t(deg) * size_t(q_)];
        int best = 0;
        double best_v = post[0];
        double total = post[0];
        for (int x = 1; x < q_; ++x) {
            total += post[x];
            if (post[x] > best_v) {
                best_v = post[x];
                best = x;
            }
        }
        if (!(total > 0.0) || !std::isfinite(total)) {
            res.degenerate = true;
            return false;
        }
        decided_[size_t(j)] = Symbol(best);

        // Backward sweep emits the leave-one-out products.
        for (int t = deg - 1; t >= 0; --t) {
            double* out = &qmsg_[size_t(eids[size_t(t)]) * size_t(q_)];
            const double* g = &fwd_[size_t(t) * size_t(q_)];
            if (t == deg - 1) {
                if (!normalize_into(out, g)) {
                    res.degenerate = true;
                    return false;
                }
            } else {
                for (int x = 0; x < q_; ++x) out[x] = g[x] * bacc_[size_t(x)];
                res.ops.float_mul += std::uint64_t(q_);
                if (!normalize_into(out, out)) {
                    res.degenerate = true;
                    return false;
                }
            }
            if (t > 0) {
                const double* r = &rmsg_[size_t(eids[size_t(t)]) * size_t(q_)];
                if (t == deg - 1) {
                    std::copy_n(r, q_, bacc_.data());
                } else {
                    for (int x = 0; x < q_; ++x) bacc_[size_t(x)] *= r[x];
                    res.ops.float_mul += std::uint64_t(q_);
                }
            }
        }
    }
    return true;
}

DecodeResult QspaDecoder::decode(std::span<const double> priors, const DecodeOptions& opt) {
    if (priors.size() != size_t(n_) * size_t(q_))
        throw std::invalid_argument("decode: expected n*q prior values");
    DecodeResult res;
    res.ops.peak_message_doubles = 2ull * std::uint64_t(e_) * std::uint64_t(q_);

    for (int j = 0; j < n_; ++j) {
        const double* src = &priors[size_t(j) * size_t(q_)];
        double* dst = &prior_[size_t(j) * size_t(q_)];
        if (!normalize_into(dst, src)) {
            res.degenerate = true;
            res.decided.assign(size_t(n_), 0);
            return res;
        }
        int best = 0;
        for (int x = 1; x < q_; ++x)
            if (dst[x] > dst[best]) best = x;
        decided_[size_t(j)] = Symbol(best);
    }
    for (int e = 0; e < e_; ++e)
        std::copy_n(&prior_[size_t(edge_var_[size_t(e)]) * size_t(q_)], q_,
                    &qmsg_[size_t(e) * size_t(q_)]);

    for (int it = 1; it <= opt.max_iterations; ++it) {
        check_pass(res);
        if (res.degenerate) break;
        if (!variable_pass(res)) break;
        res.iterations_used = it;

        std::fill(synd_.begin(), synd_.end(), Symbol(0));
        for (const CodeEntry& ed : code_->edges())
            synd_[size_t(ed.row)] ^=
                code_->field().mul(ed.label, decided_[size_t(ed.col)]);
        res.converged =
            std::all_of(synd_.begin(), synd_.end(), [](Symbol s) { return s == 0; });
        if (res.converged && opt.early_stop) break;
    }

    res.decided.assign(decided_.begin(), decided_.end());
    return res;
}

DecodeResult QspaDecoder::decode(std::span<const Dist> priors, const DecodeOptions& opt) {
    if (int(priors.size()) != n_) throw std::invalid_argument("decode: expected n priors");
    std::vector<double> flat(size_t(n_) * size_t(q_));
    for (int j = 0; j < n_; ++j) {
        if (priors[size_t(j)].q() != q_)
            throw std::invalid_argument("decode: prior size does not match the field");
        std::copy_n(priors[size_t(j)].p.data(), q_, &flat[size_t(j) * size_t(q_)]);
    }
    return decode(std::span<const double>(flat), opt);
}

DecodeResult decode(const Code& code, std::span<const Dist> priors, const DecodeOptions& opt) {
    QspaDecoder dec(code);
    return dec.decode(priors, opt);
}

std::vector<Dist> check_node_update(const GaloisField& f, std::span<const Symbol> labels,
                                    std::span<const Dist> incoming) {
    if (labels.size() != incoming.size())
        throw std::invalid_argument("check_node_update: one label per message");
    if (labels.empty()) throw std::invalid_argument("check_node_update: no edges");
    const int deg = int(labels.size());

    std::vector<Dist> seen(static_cast<size_t>(deg));
    for (int k = 0; k < deg; ++k) seen[size_t(k)] = scale_permute(f, labels[size_t(k)], incoming[size_t(k)]);

    std::vector<Dist> out(static_cast<size_t>(deg));
    for (int k = 0; k < deg; ++k) {
        Dist acc = Dist::point_mass(f.q(), 0);  // convolution identity
        for (int i = 0; i < deg; ++i)
            if (i != k) acc = convolve(acc, seen[size_t(i)]);
        out[size_t(k)] = scale_permute(f, f.inv(labels[size_t(k)]), acc);
    }
    return out;
}

Dist variable_node_update(const Dist& prior, std::span<const Dist> incoming, int exclude) {
    std::vector<Dist> factors;
    factors.push_back(prior);
    for (int i = 0; i < int(incoming.size()); ++i)
        if (i != exclude) factors.push_back(incoming[size_t(i)]);
    return pointwise_product(factors);
}

}  // namespace nbldpc
