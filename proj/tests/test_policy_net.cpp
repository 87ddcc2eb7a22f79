#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "nlns/adam.hpp"
#include "nlns/params_io.hpp"
#include "nlns/policy_net.hpp"
#include "oracles.hpp"

using namespace nlns;

namespace {

std::vector<FeatureRow> random_features(int m, Rng& rng) {
    std::vector<FeatureRow> rows(m);
    rows[0] = {rng.uniform(), rng.uniform(), -1.0, 0.0};
    for (int i = 1; i < m; ++i)
        rows[i] = {rng.uniform(), rng.uniform(), rng.uniform(), static_cast<double>(rng.uniform_int(1, 3))};
    return rows;
}

std::vector<uint8_t> random_mask(int m, Rng& rng, int ref) {
    std::vector<uint8_t> mask(m, 0);
    mask[0] = 1;
    for (int i = 1; i < m; ++i)
        if (i != ref) mask[i] = rng.chance(0.7) ? 1 : 0;
    return mask;
}

}  // namespace

TEST_CASE("identical allowed inputs get identical probabilities") {
    Rng rng(1);
    PolicyParameters p = init_policy(16, rng);
    std::vector<FeatureRow> rows = {
        {0.5, 0.5, -1.0, 0.0}, {0.2, 0.2, 0.4, 1.0}, {0.7, 0.7, 0.3, 1.0}, {0.7, 0.7, 0.3, 1.0}};
    std::vector<uint8_t> mask = {1, 0, 1, 1};
    Vec probs = policy_forward(p, rows, mask, 1);
    CHECK(probs[2] == doctest::Approx(probs[3]).epsilon(1e-12));
    CHECK(probs[1] == 0.0);
    CHECK(probs[0] + probs[2] + probs[3] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("a single allowed action takes all the probability") {
    Rng rng(2);
    PolicyParameters p = init_policy(8, rng);
    std::vector<FeatureRow> rows = random_features(4, rng);
    std::vector<uint8_t> mask = {1, 0, 0, 0};
    Vec probs = policy_forward(p, rows, mask, 2);
    CHECK(probs[0] == doctest::Approx(1.0));
    CHECK(probs[1] == 0.0);
    CHECK(probs[2] == 0.0);
    CHECK(probs[3] == 0.0);
}

TEST_CASE("permuting non-depot inputs permutes the distribution") {
    Rng rng(3);
    PolicyParameters p = init_policy(12, rng);
    auto rows = random_features(6, rng);
    std::vector<uint8_t> mask = {1, 1, 0, 1, 1, 0};
    Vec base = policy_forward(p, rows, mask, 2);

    // swap inputs 1 and 4 (reference index 2 stays put)
    auto rows2 = rows;
    std::swap(rows2[1], rows2[4]);
    auto mask2 = mask;
    std::swap(mask2[1], mask2[4]);
    Vec perm = policy_forward(p, rows2, mask2, 2);
    CHECK(perm[1] == doctest::Approx(base[4]).epsilon(1e-12));
    CHECK(perm[4] == doctest::Approx(base[1]).epsilon(1e-12));
    CHECK(perm[3] == doctest::Approx(base[3]).epsilon(1e-12));
}

TEST_CASE("forward matches the straight-line scalar recomputation") {
    for (uint64_t seed = 0; seed < 40; ++seed) {
        Rng rng(seed);
        int d = seed % 2 == 0 ? 8 : 16;
        int m = rng.uniform_int(2, 12);
        PolicyParameters p = init_policy(d, rng);
        auto rows = random_features(m, rng);
        int ref = m == 2 ? 1 : rng.uniform_int(1, m - 1);
        auto mask = random_mask(m, rng, ref);
        Vec got = policy_forward(p, rows, mask, ref);
        auto want = oracles::scalar_forward(p, rows, mask, ref);
        double sum = 0;
        for (int i = 0; i < m; ++i) {
            CHECK(std::abs(got[i] - want[i]) < 1e-10);
            if (!mask[i]) CHECK(got[i] == 0.0);
            sum += got[i];
        }
        CHECK(std::abs(sum - 1.0) < 1e-9);
    }
}

TEST_CASE("sampling follows the distribution and is seed-reproducible") {
    Rng rng(5);
    PolicyParameters p = init_policy(8, rng);
    auto rows = random_features(5, rng);
    std::vector<uint8_t> mask = {1, 1, 0, 1, 1};
    Vec probs = policy_forward(p, rows, mask, 2);

    Rng s1(77), s2(77);
    for (int i = 0; i < 100; ++i) CHECK(sample_index(probs, s1) == sample_index(probs, s2));

    const int draws = 100000;
    std::vector<int> counts(5, 0);
    Rng rng2(123);
    for (int i = 0; i < draws; ++i) ++counts[sample_index(probs, rng2)];
    for (int i = 0; i < 5; ++i) {
        double expected = probs[i] * draws;
        double sigma = std::sqrt(std::max(probs[i] * (1 - probs[i]) * draws, 1e-9));
        CHECK(std::abs(counts[i] - expected) <= 3 * sigma + 1);
    }
}

TEST_CASE("greedy action takes the argmax with lowest-index ties") {
    CHECK(greedy_index({0.2, 0.5, 0.3}) == 1);
    CHECK(greedy_index({0.4, 0.4, 0.2}) == 0);
    Vec sure = {0.0, 1.0, 0.0};
    CHECK(greedy_index(sure) == 1);
    Rng r(1);
    CHECK(sample_index(sure, r) == 1);
    CHECK(std::log(sure[1]) == 0.0);
}

TEST_CASE("zero weights give a zero gradient") {
    Rng rng(6);
    PolicyParameters p = init_policy(8, rng);
    auto rows = random_features(4, rng);
    std::vector<uint8_t> mask = {1, 1, 1, 0};
    StepTrace trace;
    Vec probs = policy_forward(p, rows, mask, 3, &trace);
    trace.action = 1;
    PolicyParameters grad = zeros_like(p);
    policy_backward(p, trace, 0.0, grad);
    for (const auto& view : param_views(grad))
        for (double g : *view.data) CHECK(g == 0.0);
}

TEST_CASE("analytic gradients match central finite differences") {
    for (uint64_t seed = 0; seed < 6; ++seed) {
        Rng rng(seed + 40);
        int d = std::vector<int>{4, 8, 16}[seed % 3];
        int m = rng.uniform_int(2, 12);
        PolicyParameters p = init_policy(d, rng);
        auto rows = random_features(m, rng);
        int ref = m == 2 ? 1 : rng.uniform_int(1, m - 1);
        auto mask = random_mask(m, rng, ref);

        StepTrace trace;
        Vec probs = policy_forward(p, rows, mask, ref, &trace);
        trace.action = sample_index(probs, rng);
        double weight = rng.uniform(0.5, 2.0);

        PolicyParameters grad = zeros_like(p);
        policy_backward(p, trace, weight, grad);

        auto f = [&] { return weight * std::log(policy_forward(p, rows, mask, ref)[trace.action]); };
        auto numeric = oracles::finite_difference(param_views(p), f, 1e-5);

        size_t idx = 0;
        double worst = 0;
        int skipped = 0;
        for (const auto& view : param_views(grad))
            for (double g : *view.data) {
                if (numeric.smooth[idx])
                    worst = std::max(worst, oracles::relative_error(g, numeric.grad[idx]));
                else
                    ++skipped;
                ++idx;
            }
        CHECK(worst <= 1e-4);
        CHECK(skipped <= 4);  // kink probes must stay rare
    }
}

TEST_CASE("two-action gradients are antisymmetric across the branches") {
    // with exactly two allowed actions p_a + p_b == 1 identically in theta,
    // so p_a * grad(log p_a) + p_b * grad(log p_b) == grad(p_a + p_b) == 0
    Rng rng(9);
    PolicyParameters p = init_policy(8, rng);
    std::vector<FeatureRow> rows = {
        {0.5, 0.5, -1.0, 0.0}, {0.3, 0.3, 0.2, 1.0}, {0.7, 0.7, 0.4, 1.0}, {0.1, 0.9, 0.6, 2.0}};
    std::vector<uint8_t> mask = {0, 0, 1, 1};

    StepTrace t2;
    Vec probs = policy_forward(p, rows, mask, 1, &t2);
    t2.action = 2;
    PolicyParameters g2 = zeros_like(p);
    policy_backward(p, t2, 1.0, g2);

    StepTrace t3;
    policy_forward(p, rows, mask, 1, &t3);
    t3.action = 3;
    PolicyParameters g3 = zeros_like(p);
    policy_backward(p, t3, 1.0, g3);

    auto v2 = param_views(g2);
    auto v3 = param_views(g3);
    double worst = 0;
    for (size_t t = 0; t < v2.size(); ++t)
        for (size_t i = 0; i < v2[t].data->size(); ++i)
            worst = std::max(worst,
                             std::abs(probs[2] * (*v2[t].data)[i] + probs[3] * (*v3[t].data)[i]));
    CHECK(worst < 1e-10);

    // degenerate tie: identical branch inputs make both gradients vanish, the
    // trivially antisymmetric case
    std::vector<FeatureRow> tie_rows = rows;
    tie_rows[3] = tie_rows[2];
    StepTrace tt;
    Vec tie_probs = policy_forward(p, tie_rows, mask, 1, &tt);
    CHECK(tie_probs[2] == doctest::Approx(0.5).epsilon(1e-12));
    tt.action = 2;
    PolicyParameters gt = zeros_like(p);
    policy_backward(p, tt, 1.0, gt);
    for (const auto& view : param_views(gt))
        for (double g : *view.data) CHECK(std::abs(g) < 1e-12);
}

TEST_CASE("adam: first-step size, zero-gradient fixpoint, determinism") {
    // single parameter, gradient 1: the bias-corrected first step is -lr
    PolicyParameters p = zeros_like([] {
        Rng r(1);
        return init_policy(4, r);
    }());
    PolicyParameters g = zeros_like(p);
    (*param_views(g)[0].data)[0] = 1.0;
    AdamState st;
    double before = (*param_views(p)[0].data)[0];
    adam_step(param_views(p), param_views(g), st, 1e-4);
    double after = (*param_views(p)[0].data)[0];
    CHECK(after - before == doctest::Approx(-1e-4).epsilon(1e-6));

    // zero gradient from a fresh state never moves the parameters
    PolicyParameters q = p;
    PolicyParameters zero = zeros_like(p);
    AdamState st2;
    for (int i = 0; i < 5; ++i) adam_step(param_views(q), param_views(zero), st2, 1e-4);
    auto qa = param_views(q);
    auto pa = param_views(p);
    for (size_t t = 0; t < qa.size(); ++t)
        for (size_t i = 0; i < qa[t].data->size(); ++i)
            CHECK((*qa[t].data)[i] == (*pa[t].data)[i]);

    // same seeds, same sequence of updates: bit-identical parameters
    Rng ra(3), rb(3);
    PolicyParameters a = init_policy(8, ra);
    PolicyParameters b = init_policy(8, rb);
    AdamState sa, sb;
    Rng ga(4), gb(4);
    for (int step = 0; step < 3; ++step) {
        PolicyParameters da = zeros_like(a), db = zeros_like(b);
        for (auto& view : param_views(da))
            for (double& x : *view.data) x = ga.uniform(-1, 1);
        for (auto& view : param_views(db))
            for (double& x : *view.data) x = gb.uniform(-1, 1);
        adam_step(param_views(a), param_views(da), sa, 1e-3);
        adam_step(param_views(b), param_views(db), sb, 1e-3);
    }
    auto av = param_views(a);
    auto bv = param_views(b);
    for (size_t t = 0; t < av.size(); ++t)
        for (size_t i = 0; i < av[t].data->size(); ++i)
            CHECK((*av[t].data)[i] == (*bv[t].data)[i]);
}

TEST_CASE("parameter files round-trip bit-exactly") {
    Rng rng(11);
    PolicyParameters p = init_policy(16, rng);
    std::string path = (std::filesystem::temp_directory_path() / "nlns_test_params.bin").string();
    save_policy(path, p, R"({"destroy":"point:0.20"})");

    std::string meta;
    PolicyParameters q = load_policy(path, &meta);
    CHECK(q.hidden == 16);
    CHECK(meta.find("point:0.20") != std::string::npos);
    auto pv = param_views(p);
    auto qv = param_views(q);
    for (size_t t = 0; t < pv.size(); ++t)
        for (size_t i = 0; i < pv[t].data->size(); ++i)
            CHECK((*pv[t].data)[i] == (*qv[t].data)[i]);
    std::filesystem::remove(path);
}

TEST_CASE("hidden width comes from the file") {
    Rng rng(12);
    PolicyParameters p = init_policy(64, rng);
    std::string path = (std::filesystem::temp_directory_path() / "nlns_test_params64.bin").string();
    save_policy(path, p, "{}");
    PolicyParameters q = load_policy(path);
    CHECK(q.hidden == 64);
    CHECK(param_count(q) == param_count(p));
    std::filesystem::remove(path);
}

TEST_CASE("truncated and corrupt files fail loudly, not crash") {
    Rng rng(13);
    PolicyParameters p = init_policy(8, rng);
    auto dir = std::filesystem::temp_directory_path();
    std::string path = (dir / "nlns_test_trunc.bin").string();
    save_policy(path, p, "{}");

    auto size = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, size / 2);
    CHECK_THROWS_AS(load_policy(path), std::runtime_error);

    std::string garbage = (dir / "nlns_test_garbage.bin").string();
    std::ofstream(garbage) << "not a parameter file at all";
    CHECK_THROWS_AS(load_policy(garbage), std::runtime_error);

    CHECK_THROWS_AS(load_policy((dir / "nlns_does_not_exist.bin").string()), std::runtime_error);
    std::filesystem::remove(path);
    std::filesystem::remove(garbage);
}
