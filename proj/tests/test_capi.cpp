// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <filesystem>
#include <string>

#include "attention.hpp"
#include "doctest.h"
#include "litefocus/litefocus.h"
#include "sparse_attention.hpp"
#include "tensor.hpp"

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("tensor create/inspect/free") {
    const uint64_t dims[2] = {2, 3};
    const float values[6] = {1, 2, 3, 4, 5, 6};
    lf_tensor* t = nullptr;
    REQUIRE(lf_tensor_create(dims, 2, values, &t) == LF_OK);
    CHECK(lf_tensor_rank(t) == 2);
    CHECK(lf_tensor_dim(t, 0) == 2);
    CHECK(lf_tensor_dim(t, 1) == 3);
    CHECK(lf_tensor_dim(t, 2) == 0);
    CHECK(lf_tensor_size(t) == 6);
    CHECK(std::memcmp(lf_tensor_data(t), values, sizeof values) == 0);
    lf_tensor_free(t);
}

TEST_CASE("error paths set codes and messages") {
    lf_tensor* t = nullptr;
    CHECK(lf_tensor_create(nullptr, 0, nullptr, &t) == LF_ERR_VALIDATION);
    CHECK(lf_tensor_create(nullptr, 0, nullptr, nullptr) == LF_ERR_NULL_ARG);

    const uint64_t zero_dim[1] = {0};
    CHECK(lf_tensor_create(zero_dim, 1, nullptr, &t) == LF_ERR_VALIDATION);
    CHECK(std::string(lf_last_error()).size() > 0);

    CHECK(lf_tensor_read(temp_path("lf_capi_missing.lftn").c_str(), &t) == LF_ERR_IO);
    CHECK(std::string(lf_status_name(LF_ERR_IO)) == "io");
}

TEST_CASE("random tensors round-trip through files") {
    const uint64_t dims[2] = {4, 5};
    lf_tensor* t = nullptr;
    REQUIRE(lf_tensor_random(dims, 2, 9, LF_DIST_UNIFORM01, &t) == LF_OK);
    const std::string path = temp_path("lf_capi_rt.lftn");
    REQUIRE(lf_tensor_write(t, path.c_str()) == LF_OK);

    lf_tensor* back = nullptr;
    REQUIRE(lf_tensor_read(path.c_str(), &back) == LF_OK);
    CHECK(lf_tensor_size(back) == 20);
    CHECK(std::memcmp(lf_tensor_data(back), lf_tensor_data(t), 20 * 4) == 0);
    lf_tensor_free(t);
    lf_tensor_free(back);
}

TEST_CASE("C attention agrees with the core library") {
    using namespace litefocus;
    const Spectrogrid grid(6, 4);
    const uint64_t dims[2] = {grid.tokens(), 8};
    lf_tensor *q = nullptr, *k = nullptr, *v = nullptr, *out = nullptr;
    REQUIRE(lf_tensor_random(dims, 2, 1, LF_DIST_STANDARD_NORMAL, &q) == LF_OK);
    REQUIRE(lf_tensor_random(dims, 2, 2, LF_DIST_STANDARD_NORMAL, &k) == LF_OK);
    REQUIRE(lf_tensor_random(dims, 2, 3, LF_DIST_STANDARD_NORMAL, &v) == LF_OK);

    lf_attention_opts opts = lf_attention_opts_default(LF_MODE_LITEFOCUS);
    opts.r = 0.25;
    opts.seed = 7;
    uint64_t evals = 0;
    const lf_grid cgrid{6, 4};
    REQUIRE(lf_attention(q, k, v, cgrid, &opts, &out, &evals) == LF_OK);

    const Tensor cq = random_tensor({grid.tokens(), 8}, 1, Dist::standard_normal);
    const Tensor ck = random_tensor({grid.tokens(), 8}, 2, Dist::standard_normal);
    const Tensor cv = random_tensor({grid.tokens(), 8}, 3, Dist::standard_normal);
    uint64_t core_evals = 0;
    const Tensor expect = litefocus_attention_grouped(
        cq, ck, cv, grid, AttentionMode::litefocus(0.25, 7), 1, &core_evals);
    CHECK(evals == core_evals);
    CHECK(std::memcmp(lf_tensor_data(out), expect.data(), expect.size() * 4) == 0);

    uint64_t count = 0;
    REQUIRE(lf_attended_pair_count(cgrid, &opts, &count) == LF_OK);
    CHECK(count == evals);

    double esize = 0.0;
    REQUIRE(lf_expected_focus_size(cgrid, 0.25, &esize) == LF_OK);
    CHECK(esize == doctest::Approx(expected_focus_size(grid, 0.25)));

    lf_tensor_free(q);
    lf_tensor_free(k);
    lf_tensor_free(v);
    lf_tensor_free(out);
}

TEST_CASE("degenerate focus maps to its own status") {
    const uint64_t dims[2] = {9, 4};
    lf_tensor *q = nullptr, *k = nullptr, *v = nullptr, *out = nullptr;
    REQUIRE(lf_tensor_random(dims, 2, 1, LF_DIST_STANDARD_NORMAL, &q) == LF_OK);
    REQUIRE(lf_tensor_random(dims, 2, 2, LF_DIST_STANDARD_NORMAL, &k) == LF_OK);
    REQUIRE(lf_tensor_random(dims, 2, 3, LF_DIST_STANDARD_NORMAL, &v) == LF_OK);
    lf_attention_opts opts = lf_attention_opts_default(LF_MODE_COMPONLY);
    opts.r = 0.05;  // floor(0.05 * 9) == 0
    CHECK(lf_attention(q, k, v, lf_grid{3, 3}, &opts, &out, nullptr) ==
          LF_ERR_DEGENERATE_FOCUS);
    lf_tensor_free(q);
    lf_tensor_free(k);
    lf_tensor_free(v);
}

TEST_CASE("pattern surface") {
    const lf_grid grid{8, 4};
    lf_tensor* map = nullptr;
    REQUIRE(lf_synthesize_biased_attention(grid, 0.0, 1.0, 5, &map) == LF_OK);
    lf_lift_stats stats{};
    REQUIRE(lf_frequency_lift(map, grid, 500, 1, &stats) == LF_OK);
    CHECK(stats.ci_low <= stats.mean_lift);
    CHECK(stats.ci_high >= stats.mean_lift);

    const std::string pgm = temp_path("lf_capi.pgm");
    REQUIRE(lf_export_heatmap(map, pgm.c_str(), LF_HEATMAP_PGM) == LF_OK);
    lf_tensor* reshaped = nullptr;
    REQUIRE(lf_reshape_by_frequency(map, grid, &reshaped) == LF_OK);
    CHECK(lf_tensor_size(reshaped) == lf_tensor_size(map));
    lf_tensor_free(map);
    lf_tensor_free(reshaped);
}

TEST_CASE("pipeline through the C API is deterministic") {
    lf_pipeline_opts opts = lf_pipeline_opts_default(lf_grid{8, 4});
    opts.channels = 8;
    opts.n_blocks = 2;
    opts.steps = 2;
    opts.seed = 11;
    opts.sparse = lf_attention_opts_default(LF_MODE_LITEFOCUS);

    lf_tensor* final_a = nullptr;
    lf_tensor* final_b = nullptr;
    lf_timing_report ra{}, rb{};
    REQUIRE(lf_run_pipeline(&opts, nullptr, &final_a, &ra) == LF_OK);
    REQUIRE(lf_run_pipeline(&opts, nullptr, &final_b, &rb) == LF_OK);
    CHECK(ra.attention_score_evals == rb.attention_score_evals);
    CHECK(ra.attention_score_evals > 0);
    CHECK(ra.attention_share >= 0.0);
    CHECK(ra.attention_share <= 1.0);
    CHECK(std::memcmp(lf_tensor_data(final_a), lf_tensor_data(final_b),
                      lf_tensor_size(final_a) * 4) == 0);
    lf_tensor_free(final_a);
    lf_tensor_free(final_b);
}
