#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nbldpc/code.hpp"
#include "nbldpc/modem.hpp"
#include "nbldpc/qspa.hpp"

namespace nbldpc {

// One coding level: a code over GF(2^field_m) of length n_symbols (or, for
// the binary scheme, of length n_symbols * bits_per_symbol), or no code at
// all (symbols pass through uncoded).
struct LevelSpec {
    int field_m = 1;
    bool coded = true;
    int k = 0;  // information symbols; ignored when uncoded
    DegreeProfile profile;
};

struct SchemeSpec {
    enum class Kind {
        binary_gray,   // one binary code across all Gray label bits
        single_level,  // one code over GF(constellation size), Gray labels
        multilevel     // lattice levels, multistage decoding
    };

    std::string name;
    Kind kind = Kind::multilevel;
    int constellation = 64;
    int n_symbols = 0;
    std::vector<LevelSpec> levels;  // binary_gray / single_level: one entry

    int bits_per_symbol() const;
    int info_bits() const;          // per block, from the level k values
    double rate_total() const;      // info_bits / (n_symbols * bits_per_symbol)

    // Same scheme at a different block length; level dimensions scale
    // proportionally (exact for the shipped presets' round factors).
    SchemeSpec scaled(int new_n_symbols) const;
};

const std::vector<std::string>& preset_names();
SchemeSpec preset(const std::string& name);

struct LevelReport {
    bool coded = false;
    bool converged = false;  // uncoded and genie levels report true
    bool degenerate = false;
    int iterations = 0;
    std::vector<Symbol> codeword;  // decided code symbols
    std::vector<Symbol> info;      // decided information symbols
};

struct MsdResult {
    std::vector<LevelReport> levels;
    OpCounts ops;  // summed over the coded levels
    int total_iterations = 0;
};

class MlcScheme;

// Per-thread decode scratch (QSPA decoders and prior buffers); one instance
// per concurrent stream.
class MsdWorkspace {
public:
    explicit MsdWorkspace(const MlcScheme& scheme);

private:
    friend class MlcScheme;
    std::vector<std::unique_ptr<QspaDecoder>> decoders_;  // per level, null if uncoded
    std::vector<double> prior_flat_;
};

// A modulation-plus-coding scheme bound to constructed codes.
class MlcScheme {
public:
    // Builds the level codes with progressive edge growth; label seeds are
    // retried deterministically until every matrix has full rank.
    MlcScheme(SchemeSpec spec, std::uint64_t seed);
    // Uses caller-provided codes (e.g. loaded from files) instead.
    MlcScheme(SchemeSpec spec, std::vector<std::shared_ptr<const Code>> codes);

    const SchemeSpec& spec() const { return spec_; }
    const std::string& name() const { return spec_.name; }
    int n_symbols() const { return spec_.n_symbols; }
    int bits_per_symbol() const { return spec_.bits_per_symbol(); }
    int num_levels() const { return int(spec_.levels.size()); }
    int info_bits() const { return spec_.info_bits(); }
    double rate_total() const { return spec_.rate_total(); }

    const Code* level_code(int level) const;          // null for uncoded levels
    const LevelPartition* partition() const;          // multilevel only
    const Constellation* gray() const;                // gray kinds only

    // Information symbols per level (uncoded level: n_symbols raw symbols;
    // binary level: k bits as 0/1 symbols).
    int level_info_len(int level) const;
    std::vector<Cplx> encode(const std::vector<std::vector<Symbol>>& info) const;
    // Also hands back the per-level code symbols that were mapped.
    std::vector<Cplx> encode(const std::vector<std::vector<Symbol>>& info,
                             std::vector<std::vector<Symbol>>* codewords_out) const;

    // Multistage decoding: levels are demapped and decoded in order, each
    // conditioned on hard decisions of the levels below; no iteration
    // between levels. Levels below `genie_below` take their true symbols
    // from `genie` instead of being decoded (analysis aid).
    MsdResult decode(std::span<const Cplx> y, double n0, const DecodeOptions& opt,
                     MsdWorkspace& ws,
                     const std::vector<std::vector<Symbol>>* genie = nullptr,
                     int genie_below = 0) const;
    MsdResult decode(std::span<const Cplx> y, double n0,
                     const DecodeOptions& opt = {}) const;

    // Level-major bit packing of an info block (symbols LSB-first);
    // used for bit-error accounting.
    std::vector<std::uint8_t> info_to_bits(
        const std::vector<std::vector<Symbol>>& info) const;

private:
    void validate_codes();

    SchemeSpec spec_;
    std::vector<std::shared_ptr<const Code>> codes_;
    std::optional<LevelPartition> part_;
    std::optional<Constellation> gray_;
};

}  // namespace nbldpc
