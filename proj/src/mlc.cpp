#include "nbldpc/mlc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nbldpc/rng.hpp"

namespace nbldpc {

int SchemeSpec::bits_per_symbol() const {
    for (int b = 2; b <= 8; b += 2)
        if (constellation == (1 << b)) return b;
    throw std::invalid_argument("scheme: constellation size must be 4, 16, 64, or 256");
}

int SchemeSpec::info_bits() const {
    int total = 0;
    for (const LevelSpec& l : levels)
        total += (l.coded ? l.k : n_symbols) * l.field_m;
    return total;
}

double SchemeSpec::rate_total() const {
    return double(info_bits()) / (double(n_symbols) * double(bits_per_symbol()));
}

SchemeSpec SchemeSpec::scaled(int new_n_symbols) const {
    if (new_n_symbols < 1) throw std::invalid_argument("scaled: need at least one symbol");
    SchemeSpec s = *this;
    s.n_symbols = new_n_symbols;
    const double f = double(new_n_symbols) / double(n_symbols);
    for (size_t i = 0; i < s.levels.size(); ++i) {
        LevelSpec& l = s.levels[i];
        const LevelSpec& orig = levels[i];
        int len = (kind == Kind::binary_gray) ? new_n_symbols * bits_per_symbol()
                                              : new_n_symbols;
        if (!l.coded) continue;
        l.k = int(std::llround(double(orig.k) * f));
        l.profile.n_cols = len;
        l.profile.n_checks = len - l.k;
    }
    return s;
}

namespace {

LevelSpec coded_level(int field_m, int n, int k,
                      std::vector<std::pair<int, double>> wf) {
    LevelSpec l;
    l.field_m = field_m;
    l.coded = true;
    l.k = k;
    l.profile = DegreeProfile::mixed(n, n - k, std::move(wf));
    return l;
}

LevelSpec uncoded_level(int field_m) {
    LevelSpec l;
    l.field_m = field_m;
    l.coded = false;
    return l;
}

// Column-weight mix whose average is 2.25 (three quarters weight 2).
const std::vector<std::pair<int, double>> kMix225 = {{2, 0.75}, {3, 0.25}};

SchemeSpec make_preset(const std::string& name) {
    SchemeSpec s;
    s.name = name;
    if (name == "qam64-binary") {
        s.kind = SchemeSpec::Kind::binary_gray;
        s.constellation = 64;
        s.n_symbols = 2000;
        s.levels = {coded_level(1, 12000, 9600, {{3, 1.0}})};
    } else if (name == "qam64-gf64") {
        s.kind = SchemeSpec::Kind::single_level;
        s.constellation = 64;
        s.n_symbols = 2000;
        s.levels = {coded_level(6, 2000, 1600, {{2, 1.0}})};
    } else if (name == "qam64-gf16-mlc") {
        s.kind = SchemeSpec::Kind::multilevel;
        s.constellation = 64;
        s.n_symbols = 2000;
        s.levels = {coded_level(4, 2000, 1400, kMix225), uncoded_level(2)};
    } else if (name == "qam64-gf8-mlc") {
        s.kind = SchemeSpec::Kind::multilevel;
        s.constellation = 64;
        s.n_symbols = 2000;
        s.levels = {coded_level(3, 2000, 1300, {{2, 1.0}}),
                    coded_level(3, 2000, 1900, {{2, 1.0}})};
    } else if (name == "qam256-binary") {
        s.kind = SchemeSpec::Kind::binary_gray;
        s.constellation = 256;
        s.n_symbols = 1500;
        s.levels = {coded_level(1, 12000, 9600, {{3, 1.0}})};
    } else if (name == "qam256-gf256") {
        s.kind = SchemeSpec::Kind::single_level;
        s.constellation = 256;
        s.n_symbols = 1500;
        s.levels = {coded_level(8, 1500, 1200, {{2, 1.0}})};
    } else if (name == "qam256-gf16-mlc") {
        s.kind = SchemeSpec::Kind::multilevel;
        s.constellation = 256;
        s.n_symbols = 1500;
        s.levels = {coded_level(4, 1500, 900, kMix225), uncoded_level(4)};
    } else if (name == "qam256-gf16-mlc-r99") {
        s.kind = SchemeSpec::Kind::multilevel;
        s.constellation = 256;
        s.n_symbols = 1500;
        s.levels = {coded_level(4, 1500, 915, kMix225),
                    coded_level(4, 1500, 1485, {{2, 1.0}})};
    } else if (name == "qam256-gf16-mlc-r98") {
        s.kind = SchemeSpec::Kind::multilevel;
        s.constellation = 256;
        s.n_symbols = 1500;
        s.levels = {coded_level(4, 1500, 930, kMix225),
                    coded_level(4, 1500, 1470, {{2, 1.0}})};
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    return s;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "qam64-binary",     "qam64-gf64",         "qam64-gf16-mlc",
        "qam64-gf8-mlc",    "qam256-binary",      "qam256-gf256",
        "qam256-gf16-mlc",  "qam256-gf16-mlc-r99", "qam256-gf16-mlc-r98"};
    return names;
}

SchemeSpec preset(const std::string& name) { return make_preset(name); }

MlcScheme::MlcScheme(SchemeSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
    codes_.resize(spec_.levels.size());
    for (size_t l = 0; l < spec_.levels.size(); ++l) {
        const LevelSpec& ls = spec_.levels[l];
        if (!ls.coded) continue;
        GaloisField f(ls.field_m);
        // Retry label seeds until the matrix has full rank so the shipped
        // dimensions are exact.
        std::shared_ptr<Code> code;
        for (int attempt = 0; attempt < 32; ++attempt) {
            auto c = std::make_shared<Code>(
                peg_construct(f, ls.profile, mix_seed(seed, std::uint64_t(l), std::uint64_t(attempt))));
            if (!c->rank_deficient()) {
                code = std::move(c);
                break;
            }
        }
        if (!code)
            throw std::runtime_error("scheme '" + spec_.name +
                                     "': could not reach full rank for level " +
                                     std::to_string(l));
        codes_[l] = std::move(code);
    }
    validate_codes();
}

MlcScheme::MlcScheme(SchemeSpec spec, std::vector<std::shared_ptr<const Code>> codes)
    : spec_(std::move(spec)), codes_(std::move(codes)) {
    validate_codes();
}

void MlcScheme::validate_codes() {
    const int bits = spec_.bits_per_symbol();
    if (spec_.n_symbols < 1) throw std::invalid_argument("scheme: need at least one symbol");
    if (spec_.levels.empty()) throw std::invalid_argument("scheme: need at least one level");
    if (codes_.size() != spec_.levels.size())
        throw std::invalid_argument("scheme: one code slot per level expected");

    int width_sum = 0;
    for (const LevelSpec& l : spec_.levels) width_sum += l.field_m;

    switch (spec_.kind) {
        case SchemeSpec::Kind::binary_gray:
            if (spec_.levels.size() != 1 || spec_.levels[0].field_m != 1)
                throw std::invalid_argument("binary scheme: one binary level expected");
            break;
        case SchemeSpec::Kind::single_level:
            if (spec_.levels.size() != 1 || spec_.levels[0].field_m != bits)
                throw std::invalid_argument(
                    "single-level scheme: the code field must match the constellation");
            break;
        case SchemeSpec::Kind::multilevel:
            if (width_sum != bits)
                throw std::invalid_argument("level widths must sum to the bits per symbol");
            break;
    }

    for (size_t l = 0; l < spec_.levels.size(); ++l) {
        const LevelSpec& ls = spec_.levels[l];
        const int expected_len = (spec_.kind == SchemeSpec::Kind::binary_gray)
                                     ? spec_.n_symbols * bits
                                     : spec_.n_symbols;
        if (!ls.coded) {
            if (codes_[l]) throw std::invalid_argument("scheme: uncoded level has a code");
            if (spec_.kind != SchemeSpec::Kind::multilevel)
                throw std::invalid_argument("scheme: only lattice levels may be uncoded");
            continue;
        }
        if (!codes_[l]) throw std::invalid_argument("scheme: missing code for a coded level");
        const Code& c = *codes_[l];
        if (c.field().m() != ls.field_m)
            throw std::invalid_argument("scheme: level code field mismatch");
        if (c.n() != expected_len)
            throw std::invalid_argument("scheme: level code length mismatch");
        if (c.k() != ls.k)
            throw std::invalid_argument("scheme: level code dimension mismatch");
    }

    if (spec_.kind == SchemeSpec::Kind::multilevel) {
        std::vector<int> widths;
        for (const LevelSpec& l : spec_.levels) widths.push_back(l.field_m);
        part_ = LevelPartition::make(spec_.constellation, widths);
    } else {
        gray_ = Constellation::square_gray(spec_.constellation);
    }
}

const Code* MlcScheme::level_code(int level) const {
    return codes_[size_t(level)] ? codes_[size_t(level)].get() : nullptr;
}

const LevelPartition* MlcScheme::partition() const {
    return part_ ? &*part_ : nullptr;
}

const Constellation* MlcScheme::gray() const { return gray_ ? &*gray_ : nullptr; }

int MlcScheme::level_info_len(int level) const {
    const LevelSpec& l = spec_.levels[size_t(level)];
    return l.coded ? l.k : spec_.n_symbols;
}

std::vector<Cplx> MlcScheme::encode(const std::vector<std::vector<Symbol>>& info) const {
    return encode(info, nullptr);
}

std::vector<Cplx> MlcScheme::encode(const std::vector<std::vector<Symbol>>& info,
                                    std::vector<std::vector<Symbol>>* codewords_out) const {
    if (int(info.size()) != num_levels())
        throw std::invalid_argument("encode: one info vector per level expected");
    for (int l = 0; l < num_levels(); ++l)
        if (int(info[size_t(l)].size()) != level_info_len(l))
            throw std::invalid_argument("encode: wrong info length for level " +
                                        std::to_string(l));

    const int ns = spec_.n_symbols;
    std::vector<Cplx> points(static_cast<size_t>(ns));

    if (spec_.kind == SchemeSpec::Kind::binary_gray) {
        std::vector<Symbol> cw = codes_[0]->encode(info[0]);
        const int bits = bits_per_symbol();
        for (int t = 0; t < ns; ++t) {
            int label = 0;
            for (int b = 0; b < bits; ++b) label |= int(cw[size_t(t * bits + b)]) << b;
            points[size_t(t)] = gray_->point(label);
        }
        if (codewords_out) *codewords_out = {std::move(cw)};
        return points;
    }
    if (spec_.kind == SchemeSpec::Kind::single_level) {
        std::vector<Symbol> cw = codes_[0]->encode(info[0]);
        for (int t = 0; t < ns; ++t) points[size_t(t)] = gray_->point(cw[size_t(t)]);
        if (codewords_out) *codewords_out = {std::move(cw)};
        return points;
    }

    std::vector<std::vector<Symbol>> cws(static_cast<size_t>(num_levels()));
    for (int l = 0; l < num_levels(); ++l) {
        if (spec_.levels[size_t(l)].coded) {
            cws[size_t(l)] = codes_[size_t(l)]->encode(info[size_t(l)]);
        } else {
            cws[size_t(l)] = info[size_t(l)];
            for (Symbol s : cws[size_t(l)])
                if (s >= (1 << spec_.levels[size_t(l)].field_m))
                    throw std::invalid_argument("encode: uncoded symbol exceeds the level width");
        }
    }
    std::vector<Symbol> per_level(static_cast<size_t>(num_levels()));
    for (int t = 0; t < ns; ++t) {
        for (int l = 0; l < num_levels(); ++l) per_level[size_t(l)] = cws[size_t(l)][size_t(t)];
        points[size_t(t)] = part_->map_point(per_level);
    }
    if (codewords_out) *codewords_out = std::move(cws);
    return points;
}

MsdWorkspace::MsdWorkspace(const MlcScheme& scheme) {
    size_t max_flat = 0;
    for (int l = 0; l < scheme.num_levels(); ++l) {
        const Code* c = scheme.level_code(l);
        decoders_.push_back(c ? std::make_unique<QspaDecoder>(*c) : nullptr);
        if (c) max_flat = std::max(max_flat, size_t(c->n()) * size_t(c->field().q()));
        else max_flat = std::max(max_flat, size_t(scheme.n_symbols()) *
                                               (size_t(1) << scheme.spec().levels[size_t(l)].field_m));
    }
    prior_flat_.resize(max_flat);
}

MsdResult MlcScheme::decode(std::span<const Cplx> y, double n0,
                            const DecodeOptions& opt) const {
    MsdWorkspace ws(*this);
    return decode(y, n0, opt, ws);
}

MsdResult MlcScheme::decode(std::span<const Cplx> y, double n0, const DecodeOptions& opt,
                            MsdWorkspace& ws,
                            const std::vector<std::vector<Symbol>>* genie,
                            int genie_below) const {
    if (int(y.size()) != spec_.n_symbols)
        throw std::invalid_argument("decode: expected one received point per symbol");
    if (genie_below > 0 &&
        (genie == nullptr || int(genie->size()) < genie_below))
        throw std::invalid_argument("decode: genie levels not provided");
    if (genie_below > 0 && spec_.kind != SchemeSpec::Kind::multilevel)
        throw std::invalid_argument("decode: genie levels need a multilevel scheme");

    MsdResult out;
    out.levels.resize(static_cast<size_t>(num_levels()));
    const int ns = spec_.n_symbols;

    auto finish_coded = [&](int l, DecodeResult&& r) {
        LevelReport& rep = out.levels[size_t(l)];
        rep.coded = true;
        rep.converged = r.converged;
        rep.degenerate = r.degenerate;
        rep.iterations = r.iterations_used;
        rep.codeword = std::move(r.decided);
        const Code& c = *codes_[size_t(l)];
        rep.info.reserve(c.info_cols().size());
        for (int col : c.info_cols()) rep.info.push_back(rep.codeword[size_t(col)]);
        out.ops += r.ops;
        out.total_iterations += r.iterations_used;
    };

    if (spec_.kind == SchemeSpec::Kind::binary_gray) {
        const int bits = bits_per_symbol();
        double* flat = ws.prior_flat_.data();
        for (int t = 0; t < ns; ++t) {
            std::vector<Dist> bd = demap_bits_binary(*gray_, y[size_t(t)], n0);
            for (int b = 0; b < bits; ++b) {
                flat[(t * bits + b) * 2 + 0] = bd[size_t(b)][0];
                flat[(t * bits + b) * 2 + 1] = bd[size_t(b)][1];
            }
        }
        finish_coded(0, ws.decoders_[0]->decode(
                            std::span<const double>(flat, size_t(ns * bits) * 2), opt));
        return out;
    }

    if (spec_.kind == SchemeSpec::Kind::single_level) {
        const int q = spec_.constellation;
        double* flat = ws.prior_flat_.data();
        for (int t = 0; t < ns; ++t) {
            Dist d = demap_symbol_full(*gray_, y[size_t(t)], n0);
            std::copy_n(d.p.data(), q, flat + size_t(t) * size_t(q));
        }
        finish_coded(0, ws.decoders_[0]->decode(
                            std::span<const double>(flat, size_t(ns) * size_t(q)), opt));
        return out;
    }

    // Multistage decoding over the lattice levels.
    std::vector<std::vector<Symbol>> decided(static_cast<size_t>(num_levels()));
    std::vector<Symbol> lower;
    for (int l = 0; l < num_levels(); ++l) {
        const LevelSpec& ls = spec_.levels[size_t(l)];
        LevelReport& rep = out.levels[size_t(l)];

        if (l < genie_below) {
            const std::vector<Symbol>& truth = (*genie)[size_t(l)];
            if (int(truth.size()) != ns)
                throw std::invalid_argument("decode: genie level has wrong length");
            decided[size_t(l)] = truth;
            rep.coded = ls.coded;
            rep.converged = true;
            rep.codeword = truth;
            if (ls.coded) {
                const Code& c = *codes_[size_t(l)];
                for (int col : c.info_cols()) rep.info.push_back(truth[size_t(col)]);
            } else {
                rep.info = truth;
            }
            continue;
        }

        const int q = 1 << ls.field_m;
        double* flat = ws.prior_flat_.data();
        lower.resize(static_cast<size_t>(l));
        for (int t = 0; t < ns; ++t) {
            for (int ll = 0; ll < l; ++ll) lower[size_t(ll)] = decided[size_t(ll)][size_t(t)];
            Dist d = demap_level(*part_, l, y[size_t(t)], n0, lower);
            std::copy_n(d.p.data(), q, flat + size_t(t) * size_t(q));
        }

        if (ls.coded) {
            finish_coded(l, ws.decoders_[size_t(l)]->decode(
                                std::span<const double>(flat, size_t(ns) * size_t(q)), opt));
            decided[size_t(l)] = out.levels[size_t(l)].codeword;
        } else {
            rep.coded = false;
            rep.converged = true;
            rep.codeword.resize(static_cast<size_t>(ns));
            for (int t = 0; t < ns; ++t) {
                const double* row = flat + size_t(t) * size_t(q);
                int best = 0;
                for (int x = 1; x < q; ++x)
                    if (row[x] > row[best]) best = x;
                rep.codeword[size_t(t)] = Symbol(best);
            }
            rep.info = rep.codeword;
            decided[size_t(l)] = rep.codeword;
        }
    }
    return out;
}

std::vector<std::uint8_t> MlcScheme::info_to_bits(
    const std::vector<std::vector<Symbol>>& info) const {
    std::vector<std::uint8_t> bits;
    bits.reserve(static_cast<size_t>(info_bits()));
    for (int l = 0; l < num_levels(); ++l) {
        const int w = spec_.levels[size_t(l)].field_m;
        for (Symbol s : info[size_t(l)])
            for (int b = 0; b < w; ++b) bits.push_back(std::uint8_t((s >> b) & 1));
    }
    return bits;
}

}  // namespace nbldpc
