#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nbldpc/code.hpp"
#include "nbldpc/dist.hpp"

namespace nbldpc {

struct DecodeOptions {
    int max_iterations = 30;
    // Stop as soon as the hard decision has zero syndrome; when false the
    // decoder always runs max_iterations and reports the final iteration.
    bool early_stop = true;
};

struct OpCounts {
    std::uint64_t gf_mul = 0;      // edge-label permutations (2 per edge per iteration)
    std::uint64_t float_add = 0;   // transform butterfly additions
    std::uint64_t float_mul = 0;   // spectral and pointwise message products
    std::uint64_t peak_message_doubles = 0;  // Q + R edge-message storage

    OpCounts& operator+=(const OpCounts& o) {
        gf_mul += o.gf_mul;
        float_add += o.float_add;
        float_mul += o.float_mul;
        peak_message_doubles = std::max(peak_message_doubles, o.peak_message_doubles);
        return *this;
    }
};

struct DecodeResult {
    std::vector<Symbol> decided;
    bool converged = false;   // hard decision satisfies every check
    bool degenerate = false;  // a message lost all mass; reported, not thrown
    int iterations_used = 0;
    OpCounts ops;
};

// Flooding belief-propagation decoder in the probability domain. Check
// updates run through the Walsh-Hadamard transform: permute each incoming
// message by its edge label, transform, combine leave-one-out spectral
// products (forward/backward partial products, no division), transform
// back, and read the outgoing message through the label again. Posterior
// ties resolve to the smallest field value.
//
// Instances hold per-code workspace and are reusable across blocks; run
// concurrent blocks on independent instances.
class QspaDecoder {
public:
    explicit QspaDecoder(const Code& code);

    // priors: n() rows of q() probabilities each, row-major.
    DecodeResult decode(std::span<const double> priors, const DecodeOptions& opt = {});
    DecodeResult decode(std::span<const Dist> priors, const DecodeOptions& opt = {});

    const Code& code() const { return *code_; }

private:
    bool normalize_into(double* dst, const double* src);
    void check_pass(DecodeResult& res);
    bool variable_pass(DecodeResult& res);

    const Code* code_;
    int q_ = 0, logq_ = 0, n_ = 0, m_ = 0, e_ = 0;
    std::vector<Symbol> perm_;      // perm_[h * q + x] = h * x in the field
    std::vector<int> edge_var_;     // per edge id
    std::vector<Symbol> edge_label_;
    std::vector<double> qmsg_, rmsg_, prior_, post_;
    std::vector<double> spec_, fwd_, bacc_, tbuf_;
    std::vector<Symbol> decided_, synd_;
    int max_check_deg_ = 0, max_var_deg_ = 0;
};

// One-shot convenience wrapper.
DecodeResult decode(const Code& code, std::span<const Dist> priors,
                    const DecodeOptions& opt = {});

// Single check-node update, exposed for direct verification: given edge
// labels and one incoming message per edge, returns the outgoing message on
// every edge (leave-one-out convolutions seen through the labels).
std::vector<Dist> check_node_update(const GaloisField& f, std::span<const Symbol> labels,
                                    std::span<const Dist> incoming);

// Single variable-node update: normalized product of the prior and all
// incoming messages except `exclude` (pass -1 to keep all, i.e. posterior).
Dist variable_node_update(const Dist& prior, std::span<const Dist> incoming, int exclude);

}  // namespace nbldpc
