#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nbldpc/analysis.hpp"
#include "nbldpc/code.hpp"
#include "nbldpc/mlc.hpp"
#include "nbldpc/sim.hpp"

using nlohmann::json;
using namespace nbldpc;

namespace {

double parse_number(const std::string& text) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad number '" + text + "'");
    }
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
    if (pos != text.size()) throw std::invalid_argument("bad number '" + text + "'");
    return v;
}

// Grid forms: "" (empty), "a,b,c", or "start:stop:step" (inclusive).
std::vector<double> parse_grid(const std::string& spec) {
    std::string s = spec;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.empty()) return {};

    std::vector<double> grid;
    if (s.find(':') != std::string::npos) {
        const size_t c1 = s.find(':');
        const size_t c2 = s.find(':', c1 + 1);
        if (c2 == std::string::npos || s.find(':', c2 + 1) != std::string::npos)
            throw std::invalid_argument("grid must be start:stop:step");
        const double start = parse_number(s.substr(0, c1));
        const double stop = parse_number(s.substr(c1 + 1, c2 - c1 - 1));
        const double step = parse_number(s.substr(c2 + 1));
        if (!(step > 0)) throw std::invalid_argument("grid step must be positive");
        if (stop < start - 1e-12) throw std::invalid_argument("grid stop is below start");
        const long count = long((stop - start) / step + 1e-9) + 1;
        if (count > 100000) throw std::invalid_argument("grid has too many points");
        for (long i = 0; i < count; ++i) grid.push_back(start + double(i) * step);
    } else {
        size_t pos = 0;
        while (true) {
            const size_t comma = s.find(',', pos);
            grid.push_back(parse_number(s.substr(pos, comma - pos)));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    return grid;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    json j = json::parse(in);
    if (!j.is_object()) throw std::runtime_error("config must be a JSON object");
    return j;
}

// Inline scheme description (config key "scheme_spec"):
// { "name": ..., "kind": "binary-gray"|"single-level"|"multilevel",
//   "constellation": M, "symbols": N,
//   "levels": [ {"field_m": m, "coded": true, "k": k,
//                "weights": [[w, fraction], ...]} | {"field_m": m, "coded": false} ] }
SchemeSpec parse_scheme_spec(const json& j) {
    SchemeSpec s;
    s.name = j.value("name", std::string("custom"));
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "binary-gray")
        s.kind = SchemeSpec::Kind::binary_gray;
    else if (kind == "single-level")
        s.kind = SchemeSpec::Kind::single_level;
    else if (kind == "multilevel")
        s.kind = SchemeSpec::Kind::multilevel;
    else
        throw std::invalid_argument("scheme_spec.kind must be binary-gray, single-level, "
                                    "or multilevel");
    s.constellation = j.at("constellation").get<int>();
    s.n_symbols = j.at("symbols").get<int>();
    const int len_factor = (s.kind == SchemeSpec::Kind::binary_gray) ? s.bits_per_symbol() : 1;
    for (const json& jl : j.at("levels")) {
        LevelSpec l;
        l.field_m = jl.at("field_m").get<int>();
        l.coded = jl.value("coded", true);
        if (l.coded) {
            l.k = jl.at("k").get<int>();
            std::vector<std::pair<int, double>> wf;
            for (const json& w : jl.at("weights"))
                wf.emplace_back(w.at(0).get<int>(), w.at(1).get<double>());
            const int len = s.n_symbols * len_factor;
            l.profile = DegreeProfile::mixed(len, len - l.k, std::move(wf));
        }
        s.levels.push_back(std::move(l));
    }
    return s;
}

SchemeSpec resolve_spec(const std::string& scheme, int symbols, const json& cfg) {
    SchemeSpec spec;
    if (!scheme.empty())
        spec = preset(scheme);
    else if (cfg.contains("scheme_spec"))
        spec = parse_scheme_spec(cfg.at("scheme_spec"));
    else
        throw std::invalid_argument("missing --scheme (or config scheme/scheme_spec)");
    if (symbols > 0 && symbols != spec.n_symbols) spec = spec.scaled(symbols);
    return spec;
}

// out, out.level0/out.level1, ... when the scheme has several coded levels.
std::string level_path(const std::string& out, int level, int coded_levels) {
    if (coded_levels == 1) return out;
    const size_t slash = out.find_last_of('/');
    const size_t dot = out.find_last_of('.');
    const std::string tag = ".level" + std::to_string(level);
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out + tag;
    return out.substr(0, dot) + tag + out.substr(dot);
}

int cmd_construct(const std::string& scheme, int symbols, std::uint64_t seed, bool have_seed,
                  const std::string& out, const json& cfg) {
    if (!have_seed) throw std::invalid_argument("missing --seed");
    if (out.empty()) throw std::invalid_argument("missing --out");
    const SchemeSpec spec = resolve_spec(scheme, symbols, cfg);
    MlcScheme sch(spec, seed);

    int coded_levels = 0;
    for (int l = 0; l < sch.num_levels(); ++l)
        if (sch.level_code(l)) coded_levels++;
    if (coded_levels == 0) throw std::invalid_argument("scheme has no coded level to save");

    std::printf("scheme %s: %d symbols, %d info bits, rate %.6g\n", sch.name().c_str(),
                sch.n_symbols(), sch.info_bits(), sch.rate_total());
    for (int l = 0; l < sch.num_levels(); ++l) {
        const Code* c = sch.level_code(l);
        if (!c) continue;
        const std::string path = level_path(out, l, coded_levels);
        c->save_alist(path);
        auto g = c->girth();
        std::printf("level %d: GF(%d) n=%d k=%d edges=%d girth=%s -> %s\n", l,
                    c->field().q(), c->n(), c->k(), c->num_edges(),
                    g ? std::to_string(*g).c_str() : "none", path.c_str());
    }
    return 0;
}

int cmd_simulate(const std::string& scheme, int symbols, std::uint64_t seed, bool have_seed,
                 const std::vector<double>& grid, const StopRule& stop,
                 const RunOptions& opt, const std::vector<std::string>& matrices,
                 const std::string& out, const json& cfg) {
    if (!have_seed) throw std::invalid_argument("missing --seed");
    if (out.empty()) throw std::invalid_argument("missing --out");
    const SchemeSpec spec = resolve_spec(scheme, symbols, cfg);

    std::unique_ptr<MlcScheme> sch;
    if (!matrices.empty()) {
        int coded_levels = 0;
        for (const LevelSpec& l : spec.levels) coded_levels += l.coded ? 1 : 0;
        if (int(matrices.size()) != coded_levels)
            throw std::invalid_argument("expected " + std::to_string(coded_levels) +
                                        " --matrix files, got " +
                                        std::to_string(matrices.size()));
        std::vector<std::shared_ptr<const Code>> codes(spec.levels.size());
        size_t next = 0;
        for (size_t l = 0; l < spec.levels.size(); ++l)
            if (spec.levels[l].coded)
                codes[l] = std::make_shared<Code>(Code::load_alist(matrices[next++]));
        sch = std::make_unique<MlcScheme>(spec, std::move(codes));
    } else {
        sch = std::make_unique<MlcScheme>(spec, seed);
    }

    std::vector<SimPoint> points = sweep(*sch, grid, stop, seed, out, opt);
    std::printf("wrote %zu points to %s\n", points.size(), out.c_str());
    return 0;
}

int cmd_capacity(int constellation, bool have_rate, double rate, bool have_snr,
                 double snr_db, std::uint64_t samples, std::uint64_t seed) {
    if (have_snr) {
        CapacityEstimate est = cm_capacity(constellation, snr_db, samples, seed);
        std::printf("constellation=%d snr_db=%.10g capacity_bits=%.6f std_error=%.3e\n",
                    constellation, snr_db, est.bits, est.std_error);
        return 0;
    }
    if (have_rate) {
        const double lim = shannon_limit_db(constellation, rate, samples, seed);
        std::printf("constellation=%d rate=%.10g shannon_limit_db=%.4f\n", constellation,
                    rate, lim);
        return 0;
    }
    throw std::invalid_argument("missing --rate or --snr-db");
}

void print_complexity_row(bool csv, const std::string& name, const ComplexityParams& p) {
    ComplexityReport r =
        complexity_estimate(p.n, p.rate, p.q, p.row_avg, p.col_avg, p.row_max);
    if (csv)
        std::printf("%s,%g,%g,%d,%g,%g,%g,%lld,%lld,%lld,%lld\n", name.c_str(), p.n,
                    p.rate, p.q, p.row_avg, p.col_avg, p.row_max,
                    (long long)r.gf_mul, (long long)r.float_add, (long long)r.float_mul,
                    (long long)r.memory);
    else
        std::printf("%-20s %6g %5g %4d %8g %8g %8g %9lld %11lld %11lld %9lld\n",
                    name.c_str(), p.n, p.rate, p.q, p.row_avg, p.col_avg, p.row_max,
                    (long long)r.gf_mul, (long long)r.float_add, (long long)r.float_mul,
                    (long long)r.memory);
}

int cmd_complexity(const std::string& preset_name, bool csv, bool have_custom,
                   const ComplexityParams& custom) {
    if (csv)
        std::printf("name,n,rate,q,row_avg,col_avg,row_max,gf_mul,float_add,float_mul,"
                    "memory\n");
    else
        std::printf("%-20s %6s %5s %4s %8s %8s %8s %9s %11s %11s %9s\n", "name", "n",
                    "rate", "q", "row_avg", "col_avg", "row_max", "gf_mul", "float_add",
                    "float_mul", "memory");

    if (have_custom) {
        print_complexity_row(csv, "custom", custom);
        return 0;
    }
    const auto& table = complexity_presets();
    if (!preset_name.empty()) {
        for (const auto& [name, prm] : table)
            if (name == preset_name) {
                print_complexity_row(csv, name, prm);
                return 0;
            }
        throw std::invalid_argument("unknown complexity preset '" + preset_name + "'");
    }
    for (const auto& [name, prm] : table) print_complexity_row(csv, name, prm);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-binary LDPC coded-modulation toolkit"};
    app.require_subcommand(1);

    // construct ------------------------------------------------------------
    auto* c = app.add_subcommand("construct", "build a scheme's matrices, save alist files");
    std::string c_scheme, c_out, c_config;
    int c_symbols = 0;
    std::uint64_t c_seed = 0;
    auto* c_scheme_o = c->add_option("--scheme", c_scheme, "preset name");
    auto* c_symbols_o = c->add_option("--symbols", c_symbols, "block length in symbols");
    auto* c_seed_o = c->add_option("--seed", c_seed, "construction seed (required)");
    auto* c_out_o = c->add_option("--out", c_out, "output alist path (per coded level)");
    c->add_option("--config", c_config, "JSON config supplying unset options");

    // simulate -------------------------------------------------------------
    auto* s = app.add_subcommand("simulate", "run a block-error-rate sweep, write CSV");
    std::string s_scheme, s_ebn0, s_out, s_config;
    int s_symbols = 0, s_iters = 30, s_workers = 1, s_genie = 0;
    std::uint64_t s_seed = 0, s_stop_errors = 100, s_max_trials = 1000000;
    bool s_no_early = false, s_zero_info = false, s_progress = false;
    std::vector<std::string> s_matrices;
    auto* s_scheme_o = s->add_option("--scheme", s_scheme, "preset name");
    auto* s_symbols_o = s->add_option("--symbols", s_symbols, "block length in symbols");
    auto* s_ebn0_o =
        s->add_option("--ebn0", s_ebn0, "Eb/N0 grid: start:stop:step, a,b,c, or empty");
    auto* s_seed_o = s->add_option("--seed", s_seed, "simulation seed (required)");
    auto* s_stop_o = s->add_option("--stop-errors", s_stop_errors,
                                   "stop a point after this many block errors");
    auto* s_trials_o = s->add_option("--max-trials", s_max_trials, "trial cap per point");
    auto* s_iters_o = s->add_option("--iters", s_iters, "decoder iteration cap");
    auto* s_early_o = s->add_flag("--no-early-stop", s_no_early,
                                  "always run the full iteration count");
    auto* s_workers_o = s->add_option("--workers", s_workers, "worker threads");
    auto* s_zero_o = s->add_flag("--zero-info", s_zero_info, "send all-zero info blocks");
    auto* s_genie_o = s->add_option("--genie-below", s_genie,
                                    "feed true symbols to levels below this index");
    auto* s_matrix_o = s->add_option("--matrix", s_matrices,
                                     "alist file per coded level (instead of PEG)");
    auto* s_out_o = s->add_option("--out", s_out, "output CSV path");
    auto* s_progress_o = s->add_flag("--progress", s_progress, "per-point stderr progress");
    s->add_option("--config", s_config, "JSON config supplying unset options");

    // capacity ---------------------------------------------------------------
    auto* k = app.add_subcommand("capacity",
                                 "constrained capacity / spectral-efficiency threshold");
    std::string k_config;
    int k_constellation = 64;
    double k_rate = 0.0, k_snr = 0.0;
    std::uint64_t k_samples = 1000000, k_seed = 20240901;
    auto* k_const_o = k->add_option("--constellation", k_constellation, "4, 16, 64, or 256");
    auto* k_rate_o = k->add_option("--rate", k_rate, "total rate; prints the Eb/N0 limit");
    auto* k_snr_o = k->add_option("--snr-db", k_snr, "Es/N0; prints capacity instead");
    auto* k_samples_o = k->add_option("--samples", k_samples, "integration samples");
    auto* k_seed_o = k->add_option("--seed", k_seed, "integration seed");
    k->add_option("--config", k_config, "JSON config supplying unset options");

    // complexity -------------------------------------------------------------
    auto* x = app.add_subcommand("complexity", "per-iteration decoding cost table");
    std::string x_preset, x_config;
    bool x_csv = false;
    ComplexityParams x_prm;
    auto* x_preset_o = x->add_option("--preset", x_preset, "one preset parameter set");
    auto* x_csv_o = x->add_flag("--csv", x_csv, "machine-readable output");
    auto* x_n_o = x->add_option("--n", x_prm.n, "code length (custom parameter set)");
    auto* x_rate_o = x->add_option("--rate", x_prm.rate, "code rate");
    auto* x_q_o = x->add_option("--q", x_prm.q, "field size");
    auto* x_rowavg_o = x->add_option("--row-avg", x_prm.row_avg, "average row weight");
    auto* x_colavg_o = x->add_option("--col-avg", x_prm.col_avg, "average column weight");
    auto* x_rowmax_o = x->add_option("--row-max", x_prm.row_max, "maximum row weight");
    x->add_option("--config", x_config, "JSON config supplying unset options");

    try {
        app.parse(argc, argv);

        if (c->parsed()) {
            const json cfg = load_config(c_config);
            auto want = [&](CLI::Option* o, const char* key) {
                return !o->count() && cfg.contains(key);
            };
            if (want(c_scheme_o, "scheme")) c_scheme = cfg.at("scheme").get<std::string>();
            if (want(c_symbols_o, "symbols")) c_symbols = cfg.at("symbols").get<int>();
            if (want(c_seed_o, "seed")) c_seed = cfg.at("seed").get<std::uint64_t>();
            if (want(c_out_o, "out")) c_out = cfg.at("out").get<std::string>();
            const bool have_seed = c_seed_o->count() > 0 || cfg.contains("seed");
            return cmd_construct(c_scheme, c_symbols, c_seed, have_seed, c_out, cfg);
        }

        if (s->parsed()) {
            const json cfg = load_config(s_config);
            auto want = [&](CLI::Option* o, const char* key) {
                return !o->count() && cfg.contains(key);
            };
            if (want(s_scheme_o, "scheme")) s_scheme = cfg.at("scheme").get<std::string>();
            if (want(s_symbols_o, "symbols")) s_symbols = cfg.at("symbols").get<int>();
            if (want(s_seed_o, "seed")) s_seed = cfg.at("seed").get<std::uint64_t>();
            if (want(s_stop_o, "stop_errors"))
                s_stop_errors = cfg.at("stop_errors").get<std::uint64_t>();
            if (want(s_trials_o, "max_trials"))
                s_max_trials = cfg.at("max_trials").get<std::uint64_t>();
            if (want(s_iters_o, "iters")) s_iters = cfg.at("iters").get<int>();
            if (want(s_workers_o, "workers")) s_workers = cfg.at("workers").get<int>();
            if (want(s_genie_o, "genie_below")) s_genie = cfg.at("genie_below").get<int>();
            if (want(s_zero_o, "zero_info")) s_zero_info = cfg.at("zero_info").get<bool>();
            if (want(s_progress_o, "progress")) s_progress = cfg.at("progress").get<bool>();
            if (want(s_out_o, "out")) s_out = cfg.at("out").get<std::string>();
            if (want(s_matrix_o, "matrix"))
                s_matrices = cfg.at("matrix").get<std::vector<std::string>>();

            bool early_stop = !s_no_early;
            if (!s_early_o->count() && cfg.contains("early_stop"))
                early_stop = cfg.at("early_stop").get<bool>();

            std::vector<double> grid;
            bool have_grid = true;
            if (s_ebn0_o->count()) {
                grid = parse_grid(s_ebn0);
            } else if (cfg.contains("ebn0")) {
                if (cfg.at("ebn0").is_array())
                    grid = cfg.at("ebn0").get<std::vector<double>>();
                else
                    grid = parse_grid(cfg.at("ebn0").get<std::string>());
            } else {
                have_grid = false;
            }
            if (!have_grid) throw std::invalid_argument("missing --ebn0");
            if (s_iters < 1) throw std::invalid_argument("--iters must be at least 1");
            if (s_workers < 1) throw std::invalid_argument("--workers must be at least 1");
            if (s_genie < 0) throw std::invalid_argument("--genie-below must be >= 0");

            StopRule stop;
            stop.min_block_errors = s_stop_errors;
            stop.max_trials = s_max_trials;
            RunOptions opt;
            opt.decode.max_iterations = s_iters;
            opt.decode.early_stop = early_stop;
            opt.workers = s_workers;
            opt.zero_info = s_zero_info;
            opt.progress = s_progress;
            opt.genie_below = s_genie;
            const bool have_seed = s_seed_o->count() > 0 || cfg.contains("seed");
            return cmd_simulate(s_scheme, s_symbols, s_seed, have_seed, grid, stop, opt,
                                s_matrices, s_out, cfg);
        }

        if (k->parsed()) {
            const json cfg = load_config(k_config);
            auto want = [&](CLI::Option* o, const char* key) {
                return !o->count() && cfg.contains(key);
            };
            if (want(k_const_o, "constellation"))
                k_constellation = cfg.at("constellation").get<int>();
            if (want(k_rate_o, "rate")) k_rate = cfg.at("rate").get<double>();
            if (want(k_snr_o, "snr_db")) k_snr = cfg.at("snr_db").get<double>();
            if (want(k_samples_o, "samples"))
                k_samples = cfg.at("samples").get<std::uint64_t>();
            if (want(k_seed_o, "seed")) k_seed = cfg.at("seed").get<std::uint64_t>();
            const bool have_rate = k_rate_o->count() > 0 || cfg.contains("rate");
            const bool have_snr = k_snr_o->count() > 0 || cfg.contains("snr_db");
            return cmd_capacity(k_constellation, have_rate, k_rate, have_snr, k_snr,
                                k_samples, k_seed);
        }

        if (x->parsed()) {
            const json cfg = load_config(x_config);
            auto want = [&](CLI::Option* o, const char* key) {
                return !o->count() && cfg.contains(key);
            };
            if (want(x_preset_o, "preset")) x_preset = cfg.at("preset").get<std::string>();
            if (want(x_csv_o, "csv")) x_csv = cfg.at("csv").get<bool>();
            if (want(x_n_o, "n")) x_prm.n = cfg.at("n").get<double>();
            if (want(x_rate_o, "rate")) x_prm.rate = cfg.at("rate").get<double>();
            if (want(x_q_o, "q")) x_prm.q = cfg.at("q").get<int>();
            if (want(x_rowavg_o, "row_avg")) x_prm.row_avg = cfg.at("row_avg").get<double>();
            if (want(x_colavg_o, "col_avg")) x_prm.col_avg = cfg.at("col_avg").get<double>();
            if (want(x_rowmax_o, "row_max")) x_prm.row_max = cfg.at("row_max").get<double>();
            const bool have_custom = x_prm.n > 0 || x_n_o->count() > 0;
            return cmd_complexity(x_preset, x_csv, have_custom, x_prm);
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
