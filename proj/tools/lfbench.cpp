// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0
//
// lfbench: benchmark and analysis front end for the litefocus library.
// Subcommands: sweep (length/mode scaling), compare (two modes on identical
// inputs), pattern (frequency-lift statistics and heatmaps), gen (seeded
// LFTN tensor files).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <sys/utsname.h>

#include "CLI11.hpp"
#include "litefocus/litefocus.h"

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ToolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(lf_status status, const std::string& what) {
    if (status != LF_OK)
        throw ToolError(what + ": " + lf_last_error() + " [" +
                        lf_status_name(status) + "]");
}

using TensorPtr = std::unique_ptr<lf_tensor, decltype(&lf_tensor_free)>;

TensorPtr owned(lf_tensor* t) { return TensorPtr(t, &lf_tensor_free); }

// mode syntax: dense | litefocus:r=<f> | samefreq | componly:r=<f> | tome:ratio=<f>
lf_attention_opts parse_mode(const std::string& text) {
    std::string name = text, param;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
        name = text.substr(0, colon);
        param = text.substr(colon + 1);
    }
    const auto param_value = [&](const std::string& key) {
        if (param.rfind(key + "=", 0) != 0)
            throw UsageError("mode '" + text + "': expected " + key + "=<value>");
        try {
            size_t used = 0;
            const double v = std::stod(param.substr(key.size() + 1), &used);
            if (used != param.size() - key.size() - 1) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw UsageError("mode '" + text + "': bad numeric value");
        }
    };

    if (name == "dense") {
        if (!param.empty()) throw UsageError("mode 'dense' takes no parameters");
        return lf_attention_opts_default(LF_MODE_DENSE);
    }
    if (name == "litefocus") {
        auto opts = lf_attention_opts_default(LF_MODE_LITEFOCUS);
        if (!param.empty()) opts.r = param_value("r");
        return opts;
    }
    if (name == "samefreq") {
        if (!param.empty()) throw UsageError("mode 'samefreq' takes no parameters");
        return lf_attention_opts_default(LF_MODE_SAMEFREQ);
    }
    if (name == "componly") {
        auto opts = lf_attention_opts_default(LF_MODE_COMPONLY);
        if (!param.empty()) opts.r = param_value("r");
        return opts;
    }
    if (name == "tome") {
        auto opts = lf_attention_opts_default(LF_MODE_TOKENMERGE);
        if (!param.empty()) opts.merge_ratio = param_value("ratio");
        return opts;
    }
    throw UsageError("unknown mode '" + text + "'");
}

std::string mode_name(const lf_attention_opts& opts) {
    char buf[64];
    switch (opts.mode) {
        case LF_MODE_DENSE: return "dense";
        case LF_MODE_SAMEFREQ: return "samefreq";
        case LF_MODE_LITEFOCUS:
            std::snprintf(buf, sizeof buf, "litefocus:r=%g", opts.r);
            return buf;
        case LF_MODE_COMPONLY:
            std::snprintf(buf, sizeof buf, "componly:r=%g", opts.r);
            return buf;
        case LF_MODE_TOKENMERGE:
            std::snprintf(buf, sizeof buf, "tome:ratio=%g", opts.merge_ratio);
            return buf;
    }
    return "?";
}

std::string host_descriptor() {
    utsname u{};
    if (uname(&u) != 0) return "unknown";
    std::string s = std::string(u.sysname) + "-" + u.machine;
    for (char& c : s)
        c = char(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// ---- sweep ----------------------------------------------------------------

struct SweepArgs {
    std::vector<double> lengths;
    std::vector<std::string> modes;
    int repeats = 5;
    uint64_t seed = 0;
    uint32_t nf = 16;
    uint32_t nt_per_10s = 256;
    uint32_t heads = 1;
    uint32_t dk = 32;
    uint32_t blocks = 4;
    uint32_t steps = 8;
    int threads = 1;
    std::string sparse_blocks = "default";
    std::string out;
};

struct SweepCell {
    double wall_ms_median = 0.0;
    uint64_t score_evals = 0;
};

SweepCell run_case(const SweepArgs& args, lf_grid grid,
                   const lf_attention_opts& mode) {
    lf_pipeline_opts opts = lf_pipeline_opts_default(grid);
    opts.channels = args.heads * args.dk;
    opts.heads = args.heads;
    opts.n_blocks = args.blocks;
    opts.steps = args.steps;
    opts.seed = args.seed;
    opts.threads = args.threads;
    opts.sparse = mode;
    opts.sparse.threads = args.threads;
    std::vector<uint8_t> all_mask;
    if (args.sparse_blocks == "all" || mode.mode == LF_MODE_DENSE) {
        // dense runs every block dense no matter the mask
        all_mask.assign(args.blocks, 1);
        opts.sparse_blocks = all_mask.data();
    }

    SweepCell cell;
    std::vector<double> times;
    for (int rep = 0; rep < std::max(1, args.repeats); ++rep) {
        lf_timing_report report{};
        check(lf_run_pipeline(&opts, nullptr, nullptr, &report), "pipeline run");
        times.push_back(report.total_seconds * 1e3);
        cell.score_evals = report.attention_score_evals;
    }
    cell.wall_ms_median = median(std::move(times));
    return cell;
}

int cmd_sweep(const SweepArgs& args) {
    if (args.lengths.empty()) throw UsageError("--lengths must not be empty");
    if (args.modes.empty()) throw UsageError("--modes must not be empty");
    if (args.sparse_blocks != "default" && args.sparse_blocks != "all")
        throw UsageError("--sparse-blocks must be 'default' or 'all'");

    std::vector<lf_attention_opts> modes;
    for (const auto& text : args.modes) {
        auto opts = parse_mode(text);
        opts.seed = args.seed;
        modes.push_back(opts);
    }

    const std::string host = host_descriptor();
    std::string csv =
        "length_sec,mode,n_t,n_f,n_tokens,score_evals,wall_ms_median,repeats,"
        "speedup_vs_dense,threads,host\r\n";
    std::printf("%10s %-22s %8s %6s %9s %14s %14s %9s\n", "length_sec", "mode",
                "n_t", "n_f", "n_tokens", "score_evals", "wall_ms_median",
                "speedup");

    for (double length : args.lengths) {
        if (length <= 0) throw UsageError("lengths must be positive");
        const uint32_t n_t =
            uint32_t(std::llround(double(args.nt_per_10s) * length / 10.0));
        if (n_t == 0) throw UsageError("length too short for this grid mapping");
        const lf_grid grid{n_t, args.nf};

        // dense baseline backs the speedup column even when not requested
        SweepCell dense_cell;
        bool have_dense = false;
        for (const auto& mode : modes) {
            if (mode.mode == LF_MODE_DENSE) {
                dense_cell = run_case(args, grid, mode);
                have_dense = true;
                break;
            }
        }
        if (!have_dense)
            dense_cell = run_case(args, grid, lf_attention_opts_default(LF_MODE_DENSE));

        for (const auto& mode : modes) {
            const SweepCell cell = mode.mode == LF_MODE_DENSE
                                       ? dense_cell
                                       : run_case(args, grid, mode);
            const double speedup = dense_cell.wall_ms_median / cell.wall_ms_median;
            const std::string name = mode_name(mode);
            char line[512];
            std::snprintf(line, sizeof line,
                          "%g,%s,%u,%u,%llu,%llu,%.3f,%d,%.4f,%d,%s\r\n", length,
                          name.c_str(), n_t, args.nf,
                          (unsigned long long)(uint64_t(n_t) * args.nf),
                          (unsigned long long)cell.score_evals,
                          cell.wall_ms_median, std::max(1, args.repeats), speedup,
                          args.threads, host.c_str());
            csv += line;
            std::printf("%10g %-22s %8u %6u %9llu %14llu %14.3f %8.2fx\n", length,
                        name.c_str(), n_t, args.nf,
                        (unsigned long long)(uint64_t(n_t) * args.nf),
                        (unsigned long long)cell.score_evals, cell.wall_ms_median,
                        speedup);
        }
    }
    std::printf("# times: median of %d repeat(s) on %s, %d thread(s); counts are exact\n",
                std::max(1, args.repeats), host.c_str(), args.threads);
    std::printf("# audio quality metrics are out of scope: they need the full "
                "pretrained model stack\n");

    if (!args.out.empty()) {
        std::ofstream f(args.out, std::ios::binary | std::ios::trunc);
        if (!f.good()) throw ToolError("cannot write " + args.out);
        f << csv;
    }
    return 0;
}

// ---- compare ----------------------------------------------------------------

struct CompareArgs {
    std::string mode_a, mode_b;
    std::string impl_a = "grouped", impl_b = "grouped";
    uint32_t nt = 64, nf = 8, dk = 32, heads = 1;
    uint32_t blocks = 4, steps = 2;
    uint64_t seed = 0;
    int threads = 1;
    double tol = -1.0;  // <0: report only
};

lf_impl parse_impl(const std::string& s) {
    if (s == "grouped") return LF_IMPL_GROUPED;
    if (s == "reference") return LF_IMPL_REFERENCE;
    throw UsageError("impl must be 'grouped' or 'reference'");
}

int cmd_compare(const CompareArgs& args) {
    lf_attention_opts a = parse_mode(args.mode_a);
    lf_attention_opts b = parse_mode(args.mode_b);
    a.seed = b.seed = args.seed;
    a.impl = parse_impl(args.impl_a);
    b.impl = parse_impl(args.impl_b);
    a.threads = b.threads = args.threads;

    const lf_grid grid{args.nt, args.nf};
    const uint64_t n = uint64_t(args.nt) * args.nf;

    // one attention call on identical seeded inputs
    const uint64_t dims[2] = {n, args.dk};
    lf_tensor* raw = nullptr;
    check(lf_tensor_random(dims, 2, args.seed + 1, LF_DIST_STANDARD_NORMAL, &raw), "gen q");
    auto q = owned(raw);
    check(lf_tensor_random(dims, 2, args.seed + 2, LF_DIST_STANDARD_NORMAL, &raw), "gen k");
    auto k = owned(raw);
    check(lf_tensor_random(dims, 2, args.seed + 3, LF_DIST_STANDARD_NORMAL, &raw), "gen v");
    auto v = owned(raw);

    uint64_t evals_a = 0, evals_b = 0;
    check(lf_attention(q.get(), k.get(), v.get(), grid, &a, &raw, &evals_a),
          "attention mode_a");
    auto out_a = owned(raw);
    check(lf_attention(q.get(), k.get(), v.get(), grid, &b, &raw, &evals_b),
          "attention mode_b");
    auto out_b = owned(raw);

    double call_dev = 0.0;
    check(lf_relative_deviation(out_a.get(), out_b.get(), &call_dev), "deviation");
    const double count_ratio = evals_b ? double(evals_a) / double(evals_b) : 0.0;
    std::printf("single call : max relative deviation %.3e, score evals %llu vs %llu (ratio %.4f)\n",
                call_dev, (unsigned long long)evals_a, (unsigned long long)evals_b,
                count_ratio);

    // full pipeline on the same seed
    const auto pipeline_final = [&](const lf_attention_opts& mode) {
        lf_pipeline_opts opts = lf_pipeline_opts_default(grid);
        opts.channels = args.heads * args.dk;
        opts.heads = args.heads;
        opts.n_blocks = args.blocks;
        opts.steps = args.steps;
        opts.seed = args.seed;
        opts.threads = args.threads;
        opts.sparse = mode;
        lf_tensor* final_state = nullptr;
        lf_timing_report report{};
        check(lf_run_pipeline(&opts, nullptr, &final_state, &report), "pipeline");
        return std::pair<TensorPtr, uint64_t>(owned(final_state),
                                              report.attention_score_evals);
    };
    const auto [pipe_a, pipe_evals_a] = pipeline_final(a);
    const auto [pipe_b, pipe_evals_b] = pipeline_final(b);
    double pipe_dev = 0.0;
    check(lf_relative_deviation(pipe_a.get(), pipe_b.get(), &pipe_dev), "deviation");
    std::printf("pipeline    : max relative deviation %.3e, score evals %llu vs %llu (ratio %.4f)\n",
                pipe_dev, (unsigned long long)pipe_evals_a,
                (unsigned long long)pipe_evals_b,
                pipe_evals_b ? double(pipe_evals_a) / double(pipe_evals_b) : 0.0);

    if (args.tol >= 0.0 && (call_dev > args.tol || pipe_dev > args.tol)) {
        std::printf("FAIL: deviation exceeds tolerance %g\n", args.tol);
        return 1;
    }
    return 0;
}

// ---- pattern ----------------------------------------------------------------

struct PatternArgs {
    double synthetic = -1.0;  // >= 0 enables synthesis
    double logit_scale = 1.0;
    std::string q_path, k_path;
    uint32_t nt = 32, nf = 8;
    uint64_t seed = 0;
    uint32_t bootstrap = 1000;
    std::string heatmap;
    bool reshaped = false;
};

int cmd_pattern(const PatternArgs& args) {
    const lf_grid grid{args.nt, args.nf};
    TensorPtr map = owned(nullptr);

    if (args.synthetic >= 0.0) {
        lf_tensor* raw = nullptr;
        check(lf_synthesize_biased_attention(grid, args.synthetic, args.logit_scale,
                                             args.seed, &raw),
              "synthesize");
        map = owned(raw);
    } else if (!args.q_path.empty() && !args.k_path.empty()) {
        lf_tensor* raw = nullptr;
        check(lf_tensor_read(args.q_path.c_str(), &raw), "read --q");
        auto q = owned(raw);
        check(lf_tensor_read(args.k_path.c_str(), &raw), "read --k");
        auto k = owned(raw);
        check(lf_attention_map(q.get(), k.get(), &raw), "attention map");
        map = owned(raw);
    } else {
        throw UsageError("pattern needs --synthetic <beta> or both --q and --k");
    }

    lf_lift_stats stats{};
    check(lf_frequency_lift(map.get(), grid, args.bootstrap, args.seed, &stats),
          "frequency lift");
    std::printf("mean lift %.6f  ci95 [%.6f, %.6f]  nf %u  queries %llu\n",
                stats.mean_lift, stats.ci_low, stats.ci_high, grid.n_f,
                (unsigned long long)(uint64_t(grid.n_t) * grid.n_f));

    if (!args.heatmap.empty()) {
        check(lf_export_heatmap(map.get(), (args.heatmap + ".pgm").c_str(),
                                LF_HEATMAP_PGM),
              "export pgm");
        check(lf_export_heatmap(map.get(), (args.heatmap + ".csv").c_str(),
                                LF_HEATMAP_CSV),
              "export csv");
        if (args.reshaped) {
            lf_tensor* raw = nullptr;
            check(lf_reshape_by_frequency(map.get(), grid, &raw), "reshape");
            auto reshaped = owned(raw);
            check(lf_export_heatmap(reshaped.get(),
                                    (args.heatmap + "_reshaped.pgm").c_str(),
                                    LF_HEATMAP_PGM),
                  "export reshaped pgm");
            check(lf_export_heatmap(reshaped.get(),
                                    (args.heatmap + "_reshaped.csv").c_str(),
                                    LF_HEATMAP_CSV),
                  "export reshaped csv");
        }
        std::printf("heatmaps written to %s.{pgm,csv}%s\n", args.heatmap.c_str(),
                    args.reshaped ? " and *_reshaped.{pgm,csv}" : "");
    }
    return 0;
}

// ---- gen ----------------------------------------------------------------

struct GenArgs {
    std::vector<uint64_t> dims;
    uint64_t seed = 0;
    std::string dist = "standard_normal";
    std::string out;
};

int cmd_gen(const GenArgs& args) {
    if (args.dims.empty()) throw UsageError("--dims must not be empty");
    if (args.out.empty()) throw UsageError("--out is required");
    lf_dist dist;
    if (args.dist == "standard_normal")
        dist = LF_DIST_STANDARD_NORMAL;
    else if (args.dist == "uniform01")
        dist = LF_DIST_UNIFORM01;
    else
        throw UsageError("--dist must be standard_normal or uniform01");

    lf_tensor* raw = nullptr;
    check(lf_tensor_random(args.dims.data(), uint32_t(args.dims.size()), args.seed,
                           dist, &raw),
          "generate");
    auto t = owned(raw);
    check(lf_tensor_write(t.get(), args.out.c_str()), "write");
    std::printf("wrote %s (%llu values)\n", args.out.c_str(),
                (unsigned long long)lf_tensor_size(t.get()));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"litefocus sparse-attention benchmark suite"};
    app.require_subcommand(1);

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "scaling benchmark across audio lengths and attention modes");
    sweep_cmd->add_option("--lengths", sweep.lengths, "audio lengths in seconds")
        ->delimiter(',')
        ->required();
    sweep_cmd->add_option("--modes", sweep.modes, "comma-separated mode list")
        ->delimiter(',')
        ->required();
    sweep_cmd->add_option("--repeats", sweep.repeats, "timing repeats per case");
    sweep_cmd->add_option("--seed", sweep.seed, "base seed");
    sweep_cmd->add_option("--nf", sweep.nf, "frequency bands in the latent grid");
    sweep_cmd->add_option("--nt-per-10s", sweep.nt_per_10s,
                          "time tokens per 10 seconds of audio");
    sweep_cmd->add_option("--heads", sweep.heads, "attention heads");
    sweep_cmd->add_option("--dk", sweep.dk, "per-head width");
    sweep_cmd->add_option("--blocks", sweep.blocks, "transformer blocks");
    sweep_cmd->add_option("--steps", sweep.steps, "denoising-style iterations");
    sweep_cmd->add_option("--threads", sweep.threads, "kernel thread cap");
    sweep_cmd->add_option("--sparse-blocks", sweep.sparse_blocks,
                          "'default' (down-2/up-2 when present) or 'all'");
    sweep_cmd->add_option("--out", sweep.out, "CSV output path");

    CompareArgs cmp;
    auto* cmp_cmd = app.add_subcommand(
        "compare", "run two modes on identical seeded inputs and report deviation");
    cmp_cmd->add_option("mode_a", cmp.mode_a, "first mode")->required();
    cmp_cmd->add_option("mode_b", cmp.mode_b, "second mode")->required();
    cmp_cmd->add_option("--impl-a", cmp.impl_a, "grouped|reference");
    cmp_cmd->add_option("--impl-b", cmp.impl_b, "grouped|reference");
    cmp_cmd->add_option("--nt", cmp.nt, "time tokens");
    cmp_cmd->add_option("--nf", cmp.nf, "frequency bands");
    cmp_cmd->add_option("--dk", cmp.dk, "per-head width");
    cmp_cmd->add_option("--heads", cmp.heads, "attention heads");
    cmp_cmd->add_option("--blocks", cmp.blocks, "pipeline blocks");
    cmp_cmd->add_option("--steps", cmp.steps, "pipeline steps");
    cmp_cmd->add_option("--seed", cmp.seed, "base seed");
    cmp_cmd->add_option("--threads", cmp.threads, "kernel thread cap");
    cmp_cmd->add_option("--tol", cmp.tol,
                        "exit 1 when any deviation exceeds this value");

    PatternArgs pat;
    auto* pat_cmd = app.add_subcommand(
        "pattern", "frequency-lift statistics of an attention map");
    auto* syn_opt =
        pat_cmd->add_option("--synthetic", pat.synthetic,
                            "synthesize a map with this same-frequency logit bonus");
    auto* q_opt = pat_cmd->add_option("--q", pat.q_path, "LFTN query tensor");
    auto* k_opt = pat_cmd->add_option("--k", pat.k_path, "LFTN key tensor");
    syn_opt->excludes(q_opt)->excludes(k_opt);
    pat_cmd->add_option("--logit-scale", pat.logit_scale,
                        "noise scale for --synthetic (0 = constant logits)");
    pat_cmd->add_option("--nt", pat.nt, "time tokens");
    pat_cmd->add_option("--nf", pat.nf, "frequency bands");
    pat_cmd->add_option("--seed", pat.seed, "seed");
    pat_cmd->add_option("--bootstrap", pat.bootstrap, "bootstrap replicates");
    pat_cmd->add_option("--heatmap,--out", pat.heatmap, "write <prefix>.pgm/.csv");
    pat_cmd->add_flag("--reshaped", pat.reshaped,
                      "also write band-grouped reshaped heatmaps");

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "write a seeded random LFTN tensor");
    gen_cmd->add_option("--dims", gen.dims, "tensor dims")->delimiter(',')->required();
    gen_cmd->add_option("--seed", gen.seed, "seed");
    gen_cmd->add_option("--dist", gen.dist, "standard_normal|uniform01");
    gen_cmd->add_option("--out", gen.out, "output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit 0, parse errors exit 2
    }

    try {
        if (*sweep_cmd) return cmd_sweep(sweep);
        if (*cmp_cmd) return cmd_compare(cmp);
        if (*pat_cmd) return cmd_pattern(pat);
        if (*gen_cmd) return cmd_gen(gen);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
