// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Each criterion prints one PASS/FAIL line; the process
// exits with the number of failed criteria. `acceptance --write-goldens <dir>`
// regenerates the golden files this suite compares against.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "attention.hpp"
#include "error.hpp"
#include "focus_set.hpp"
#include "pattern.hpp"
#include "pipeline.hpp"
#include "rng.hpp"
#include "sparse_attention.hpp"
#include "tensor.hpp"
#include "tome.hpp"

using namespace litefocus;
namespace fs = std::filesystem;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool cond, const std::string& what) {
    if (!cond) throw CheckFailure(what);
}

std::string format_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string golden_dir() {
#ifdef LF_GOLDEN_DIR
    return LF_GOLDEN_DIR;
#else
    return "tests/golden";
#endif
}

std::string read_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    expect(f.good(), "cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "litefocus_acceptance";
    fs::create_directories(dir);
    return dir;
}

// fixed matrix of exact binary fractions; exports of it are byte-stable
Tensor golden_matrix() {
    return Tensor({3, 3}, {0.0f, 0.125f, 0.25f, 0.375f, 0.5f, 0.625f, 0.75f, 0.875f, 1.0f});
}

constexpr uint64_t kGoldenSeed = 42;

void write_goldens(const std::string& dir) {
    fs::create_directories(dir);
    write_tensor(random_tensor({3, 4}, kGoldenSeed, Dist::uniform01),
                 dir + "/uniform_3x4_seed42.lftn");
    export_heatmap(golden_matrix(), dir + "/ramp_3x3.pgm", HeatmapFormat::pgm);
    export_heatmap(golden_matrix(), dir + "/ramp_3x3.csv", HeatmapFormat::csv);
    std::printf("golden files written to %s\n", dir.c_str());
}

// ---- criterion 1 -----------------------------------------------------------

std::string dense_collapse() {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const size_t n_t = 2 + (size_t(trial) * 5) % 31;   // up to 32
        const size_t n_f = 1 + (size_t(trial) * 3) % 16;   // up to 16
        const Spectrogrid grid(n_t, n_f);
        const size_t d_k = trial % 2 ? 8 : 64;
        const size_t heads = trial % 4 < 2 ? 1 : 4;
        const size_t channels = heads * d_k;

        const Tensor x = random_tensor({grid.tokens(), channels},
                                       10'000 + uint64_t(trial), Dist::standard_normal);
        ProjectionWeights w;
        w.w_q = random_tensor({channels, channels}, 20'000 + uint64_t(trial),
                              Dist::standard_normal);
        w.w_k = random_tensor({channels, channels}, 30'000 + uint64_t(trial),
                              Dist::standard_normal);
        w.w_v = random_tensor({channels, channels}, 40'000 + uint64_t(trial),
                              Dist::standard_normal);
        w.heads = heads;

        const Tensor dense = multi_head_attention(
            x, w,
            [](const Tensor& q, const Tensor& k, const Tensor& v) {
                return dense_attention(q, k, v);
            });
        const AttentionMode mode = AttentionMode::litefocus(1.0, uint64_t(trial));
        const Tensor lite = multi_head_attention(
            x, w,
            [&](const Tensor& q, const Tensor& k, const Tensor& v) {
                return litefocus_attention_grouped(q, k, v, grid, mode);
            });
        worst = std::max(worst, relative_deviation(dense, lite));
    }
    expect(worst < 1e-5, "max deviation " + format_double("%.3e", worst));
    return "100 instances, max relative deviation " + format_double("%.3e", worst) +
           " < 1e-5";
}

// ---- criterion 2 -----------------------------------------------------------

std::string oracle_equivalence() {
    const double rs[] = {0.1, 0.2, 0.5, 1.0};
    double worst = 0.0;
    int executed = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const size_t n_t = 2 + (size_t(trial) * 7) % 31;
        const size_t n_f = 1 + (size_t(trial) * 5) % 16;
        const Spectrogrid grid(n_t, n_f);
        const size_t d_k = 4 + (size_t(trial) % 4) * 10;

        AttentionMode mode;
        const double r = rs[trial % 4];
        switch (trial % 3) {
            case 0: mode = AttentionMode::litefocus(r, uint64_t(trial)); break;
            case 1: mode = AttentionMode::same_freq_only(); break;
            default: {
                const double rc = std::max(r, 0.2);  // componly sweeps start at 0.2
                if (floor_fraction(rc, grid.tokens()) == 0) {
                    mode = AttentionMode::comp_only(1.0, uint64_t(trial));
                } else {
                    mode = AttentionMode::comp_only(rc, uint64_t(trial));
                }
            }
        }
        const Tensor q = random_tensor({grid.tokens(), d_k}, 911 + uint64_t(trial) * 3,
                                       Dist::standard_normal);
        const Tensor k = random_tensor({grid.tokens(), d_k}, 912 + uint64_t(trial) * 3,
                                       Dist::standard_normal);
        const Tensor v = random_tensor({grid.tokens(), d_k}, 913 + uint64_t(trial) * 3,
                                       Dist::standard_normal);
        const Tensor ref = litefocus_attention_reference(q, k, v, grid, mode);
        const Tensor fast = litefocus_attention_grouped(q, k, v, grid, mode);
        worst = std::max(worst, relative_deviation(ref, fast));
        ++executed;
    }
    expect(executed == 200, "expected 200 instances");
    expect(worst < 1e-6, "max deviation " + format_double("%.3e", worst));
    return "200 instances, grouped vs reference max deviation " +
           format_double("%.3e", worst) + " < 1e-6";
}

// ---- criterion 3 -----------------------------------------------------------

std::string cost_accounting() {
    const Spectrogrid grid(2048, 16);  // the 80-second analogue
    const double r = 0.1;
    const uint64_t n = grid.tokens();
    const uint64_t dense_count = n * n;

    // kernel-measured count for one concrete seed
    const AttentionMode mode = AttentionMode::litefocus(r, 4242);
    const size_t d_k = 8;
    const Tensor q = random_tensor({n, d_k}, 1, Dist::standard_normal);
    const Tensor k = random_tensor({n, d_k}, 2, Dist::standard_normal);
    const Tensor v = random_tensor({n, d_k}, 3, Dist::standard_normal);
    uint64_t measured = 0;
    litefocus_attention_grouped(q, k, v, grid, mode, 1, &measured);

    // independent enumeration of every per-query focus set size
    const CompensationSet comp = cross_frequency_sample(n, r, mode.seed);
    uint64_t enumerated = 0;
    for (size_t i = 0; i < n; ++i)
        enumerated += build_focus_set(grid, i, comp, true).indices.size();
    expect(measured == enumerated,
           "kernel count != enumerated per-seed focus sizes");
    expect(measured == attended_pair_count(grid, mode),
           "attended_pair_count mismatch");

    // Monte Carlo over 10^4 seeds: per-query focus fraction vs the
    // hypergeometric expectation (floor-aware)
    const size_t trials = 10'000;
    const uint64_t comp_size = floor_fraction(r, n);
    double sum = 0.0, sq = 0.0;
    std::vector<uint32_t> band_hits(grid.n_f);
    for (size_t trial = 0; trial < trials; ++trial) {
        const CompensationSet c = cross_frequency_sample(n, r, 77'000 + trial);
        std::fill(band_hits.begin(), band_hits.end(), 0u);
        for (size_t j : c.indices) band_hits[j % grid.n_f]++;
        const size_t band = trial % grid.n_f;
        const double focus_size =
            double(grid.n_t) + double(comp_size) - double(band_hits[band]);
        const double fraction = focus_size / double(n);
        sum += fraction;
        sq += fraction * fraction;
    }
    const double mean = sum / double(trials);
    const double var = sq / double(trials) - mean * mean;
    const double se = std::sqrt(std::max(var, 0.0) / double(trials));
    const double analytic = expected_focus_size(grid, r) / double(n);

    expect(std::abs(mean - analytic) <= 3.0 * se + 1e-12,
           "MC mean " + format_double("%.8f", mean) + " vs analytic " +
               format_double("%.8f", analytic) + " beyond 3 SE");

    // the r-form of the expectation, 1/n_f + r*(1 - 1/n_f) = 0.15625, treats
    // floor(r*N) as r*N; the gap is bounded by the floor quantization
    const double simplified = 1.0 / 16.0 + r * (1.0 - 1.0 / 16.0);
    const double quantization = (1.0 - 1.0 / double(grid.n_f)) / double(n);
    expect(std::abs(simplified - 0.15625) < 1e-15, "r-form expectation mis-stated");
    expect(std::abs(analytic - simplified) <= quantization,
           "floor quantization bound violated");

    const double per_seed_fraction = double(measured) / double(dense_count);
    return "per-seed fraction " + format_double("%.6f", per_seed_fraction) +
           ", MC mean " + format_double("%.6f", mean) + " = analytic " +
           format_double("%.6f", analytic) + " (3 SE), r-form 0.15625 within floor "
           "quantization " + format_double("%.1e", quantization);
}

// ---- criteria 4 and 5 ------------------------------------------------------

struct SweepPoint {
    double length = 0.0;
    double speedup = 0.0;        // median of per-repeat dense/litefocus ratios
    double dense_share = 0.0;
    double dense_attention = 0.0;
    double lite_attention = 0.0;
};

std::vector<SweepPoint> g_sweep;  // criterion 4 fills, criterion 5 reads

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v.size() % 2 ? v[v.size() / 2]
                        : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

std::string scaling_shape() {
    const double lengths[] = {10, 20, 40, 80};
    const size_t nt_per_10s = 256, n_f = 16;
    const int repeats = 4;
    g_sweep.clear();

    // The computation is deterministic, so external load only ever adds
    // time: the minimum over repeats is the cleanest wall-clock estimate.
    // Lengths are interleaved round-robin across repeats so slow host drift
    // cannot tilt one end of the sweep.
    std::vector<std::vector<double>> dense_totals(4), lite_totals(4),
        dense_attn(4), lite_attn(4), shares(4);
    for (int rep = 0; rep < repeats; ++rep) {
        for (size_t li = 0; li < 4; ++li) {
            const Spectrogrid grid(size_t(nt_per_10s * lengths[li] / 10.0), n_f);
            const PipelineConfig dense_cfg = make_pipeline(
                grid, 32, 1, 1, 1, 7, AttentionMode::dense(), {1});
            const TimingReport dr = run_pipeline(dense_cfg).report;

            const PipelineConfig lite_cfg = make_pipeline(
                grid, 32, 1, 1, 1, 7, AttentionMode::litefocus(0.1, 7), {1});
            const TimingReport lr = run_pipeline(lite_cfg).report;

            dense_totals[li].push_back(dr.total_seconds);
            lite_totals[li].push_back(lr.total_seconds);
            dense_attn[li].push_back(dr.stage.attention);
            lite_attn[li].push_back(lr.stage.attention);
            shares[li].push_back(dr.attention_share());
        }
    }

    for (size_t li = 0; li < 4; ++li) {
        const auto min_of = [](const std::vector<double>& v) {
            return *std::min_element(v.begin(), v.end());
        };
        SweepPoint point;
        point.length = lengths[li];
        point.speedup = min_of(dense_totals[li]) / min_of(lite_totals[li]);
        point.dense_share = median_of(shares[li]);
        point.dense_attention = min_of(dense_attn[li]);
        point.lite_attention = min_of(lite_attn[li]);
        g_sweep.push_back(point);
        std::printf("  length %3g s: dense attention %6.2f s (share %.4f), "
                    "litefocus attention %5.2f s, speedup %.2fx\n",
                    point.length, point.dense_attention, point.dense_share,
                    point.lite_attention, point.speedup);
        std::fflush(stdout);
    }

    std::string speedups;
    for (size_t i = 0; i < g_sweep.size(); ++i) {
        if (i) {
            expect(g_sweep[i].speedup > g_sweep[i - 1].speedup,
                   "speedup not strictly increasing at length " +
                       format_double("%g", g_sweep[i].length));
            speedups += ", ";
        }
        speedups += format_double("%.2f", g_sweep[i].speedup) + "x";
    }
    const double stage_speedup =
        g_sweep.back().dense_attention / g_sweep.back().lite_attention;
    expect(stage_speedup >= 2.0, "attention-stage speedup at 80 s only " +
                                     format_double("%.2f", stage_speedup) + "x");
    return "end-to-end speedup strictly increasing (" + speedups +
           "); attention-stage speedup at 80 s " +
           format_double("%.2f", stage_speedup) + "x >= 2x (absolute end-to-end "
           "factors are hardware-bound and not asserted, only the shape)";
}

std::string attention_share_growth() {
    expect(!g_sweep.empty(), "criterion 4 must run first");
    const double small = g_sweep.front().dense_share;
    const double large = g_sweep.back().dense_share;
    expect(large > small, "attention share did not grow with length");
    return "dense attention share rises from " + format_double("%.4f", small) +
           " (10 s) to " + format_double("%.4f", large) + " (80 s)";
}

// ---- criterion 6 -----------------------------------------------------------

std::string pattern_statistic() {
    const Spectrogrid null_grid(32, 8);
    const Tensor null_map = synthesize_biased_attention(null_grid, 0.0, 2026);
    const LiftStats stats = bootstrap_lift(null_map, null_grid, 2000, 11);
    expect(stats.ci_low <= 1.0 && 1.0 <= stats.ci_high,
           "null CI [" + format_double("%.4f", stats.ci_low) + ", " +
               format_double("%.4f", stats.ci_high) + "] misses 1.0");

    const Spectrogrid sat_grid(16, 4);
    const double saturated =
        frequency_lift(synthesize_biased_attention(sat_grid, 20.0, 3), sat_grid);
    expect(std::abs(saturated - double(sat_grid.n_f)) <= 0.01 * sat_grid.n_f,
           "saturated lift " + format_double("%.4f", saturated));

    const double beta = 1.0;
    const Tensor constant =
        synthesize_biased_attention(sat_grid, beta, 5, /*logit_scale=*/0.0);
    const double n = double(sat_grid.tokens()), nt = double(sat_grid.n_t);
    const double closed_form =
        nt * std::exp(beta) / (nt * std::exp(beta) + (n - nt)) * sat_grid.n_f;
    const double measured = frequency_lift(constant, sat_grid);
    expect(std::abs(measured - closed_form) <= 1e-3,
           "constant-logit lift " + format_double("%.6f", measured) + " vs " +
               format_double("%.6f", closed_form));

    return "null CI [" + format_double("%.3f", stats.ci_low) + ", " +
           format_double("%.3f", stats.ci_high) + "] contains 1.0; beta=20 lift " +
           format_double("%.3f", saturated) + " within 1% of n_f; constant-logit "
           "lift matches closed form within 1e-3";
}

// ---- criterion 7 -----------------------------------------------------------

std::string tome_baseline() {
    const size_t n = 256, d = 8;
    const Tensor q = random_tensor({n, d}, 61, Dist::standard_normal);
    const Tensor k = random_tensor({n, d}, 62, Dist::standard_normal);
    const Tensor v = random_tensor({n, d}, 63, Dist::standard_normal);

    expect(tome_attention(q, k, v, 0.0).same_bits(dense_attention(q, k, v)),
           "ratio 0 is not bitwise dense");

    uint64_t evals = 0;
    tome_attention(q, k, v, 0.25, 1, &evals);
    const uint64_t kept = n - n / 4;
    expect(evals == kept * kept, "count at ratio 0.25 is not (0.75N)^2");

    uint64_t prev = n * n + 1;
    for (double ratio : {0.0, 0.1, 0.2, 0.3, 0.4}) {
        uint64_t e = 0;
        tome_attention(q, k, v, ratio, 1, &e);
        expect(e < prev, "cost not strictly decreasing at ratio " +
                             format_double("%g", ratio));
        prev = e;
    }
    return "ratio 0 bitwise dense; (0.75N)^2 = " + std::to_string(kept * kept) +
           " score evals at ratio 0.25; cost strictly decreasing in merge_ratio "
           "(parity with any particular token-merging variant is not asserted)";
}

// ---- criterion 8 -----------------------------------------------------------

std::string determinism_and_formats() {
    // seeded operations, two consecutive runs each
    expect(random_tensor({64}, 5, Dist::standard_normal)
               .same_bits(random_tensor({64}, 5, Dist::standard_normal)),
           "random_tensor not reproducible");
    expect(cross_frequency_sample(1000, 0.3, 9).indices ==
               cross_frequency_sample(1000, 0.3, 9).indices,
           "compensation sample not reproducible");

    const Spectrogrid grid(8, 4);
    expect(synthesize_biased_attention(grid, 0.5, 3)
               .same_bits(synthesize_biased_attention(grid, 0.5, 3)),
           "synthesized map not reproducible");

    const Tensor q = random_tensor({grid.tokens(), 8}, 1, Dist::standard_normal);
    const Tensor k = random_tensor({grid.tokens(), 8}, 2, Dist::standard_normal);
    const Tensor v = random_tensor({grid.tokens(), 8}, 3, Dist::standard_normal);
    const AttentionMode mode = AttentionMode::litefocus(0.25, 6);
    expect(litefocus_attention_grouped(q, k, v, grid, mode)
               .same_bits(litefocus_attention_grouped(q, k, v, grid, mode)),
           "sparse kernel not reproducible");

    const MergePlan plan_a = bipartite_soft_matching(k, 0.25);
    const MergePlan plan_b = bipartite_soft_matching(k, 0.25);
    expect(plan_a.keep == plan_b.keep && plan_a.assignment == plan_b.assignment,
           "merge plan not reproducible");

    const PipelineConfig cfg =
        make_pipeline(grid, 8, 1, 2, 2, 5, AttentionMode::litefocus(0.5, 2));
    expect(run_pipeline(cfg).final_state.same_bits(run_pipeline(cfg).final_state),
           "pipeline not reproducible");

    // golden files, byte for byte
    const std::string dir = golden_dir();
    const fs::path tmp = scratch_dir();

    const Tensor uniform = random_tensor({3, 4}, kGoldenSeed, Dist::uniform01);
    const std::string lftn_path = (tmp / "uniform.lftn").string();
    write_tensor(uniform, lftn_path);
    expect(read_bytes(lftn_path) == read_bytes(dir + "/uniform_3x4_seed42.lftn"),
           "LFTN bytes drifted from golden");
    expect(read_tensor(dir + "/uniform_3x4_seed42.lftn").same_bits(uniform),
           "LFTN round-trip mismatch");

    const std::string pgm_path = (tmp / "ramp.pgm").string();
    export_heatmap(golden_matrix(), pgm_path, HeatmapFormat::pgm);
    expect(read_bytes(pgm_path) == read_bytes(dir + "/ramp_3x3.pgm"),
           "PGM bytes drifted from golden");

    const std::string csv_path = (tmp / "ramp.csv").string();
    export_heatmap(golden_matrix(), csv_path, HeatmapFormat::csv);
    expect(read_bytes(csv_path) == read_bytes(dir + "/ramp_3x3.csv"),
           "CSV bytes drifted from golden");

    return "seeded ops bitwise reproducible across consecutive runs; LFTN, PGM "
           "and CSV outputs match the golden files byte-for-byte";
}

// ---- criterion 9 -----------------------------------------------------------

std::string scope_statement() {
    return "audio quality metrics (FAD, KL, CLAP) require a pretrained audio "
           "latent diffusion checkpoint, its vocoder and a captioned audio "
           "evaluation set, all out of scope here; criteria 1-3 cover "
           "exactness, 4-5 the efficiency shape, 6 the pattern motivation";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc == 3 && std::strcmp(argv[1], "--write-goldens") == 0) {
        write_goldens(argv[2]);
        return 0;
    }

    struct Criterion {
        int id;
        const char* title;
        std::function<std::string()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "dense collapse at r=1", dense_collapse},
        {2, "grouped path equals the per-query oracle", oracle_equivalence},
        {3, "cost accounting at the 80 s analogue", cost_accounting},
        {4, "speedup grows with length, attention stage >= 2x", scaling_shape},
        {5, "dense attention share grows with length", attention_share_growth},
        {6, "frequency-lift statistic", pattern_statistic},
        {7, "token-merging baseline", tome_baseline},
        {8, "determinism and file formats", determinism_and_formats},
        {9, "out-of-scope quality metrics", scope_statement},
    };

    int failed = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = criterion.run();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::printf("[%s] criterion %d (%s, %.1f s): %s\n", ok ? "PASS" : "FAIL",
                    criterion.id, criterion.title, secs, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failed;
    }
    if (failed)
        std::printf("%d criterion(s) failed\n", failed);
    else
        std::printf("all %zu criteria passed\n", criteria.size());
    return failed;
}
