#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include <skop/sampling.hpp>

#include <cmath>
#include <numbers>

using namespace skop;

namespace {

OperatorParams params(double w) {
    OperatorParams p;
    p.w = w;
    p.truncation.tail_tolerance_decay2 = 1e-7;
    return p;
}

} // namespace

TEST_CASE("constants are reproduced") {
    const auto f = Signal::constant(3.0);
    // exact for compact kernels
    for (const auto& spec : {KernelSpec::bspline(1), KernelSpec::bspline(3),
                             KernelSpec::compound_bspline(2, 0.3), KernelSpec::c2(),
                             KernelSpec::d2()}) {
        const auto k = make_kernel(spec);
        CHECK(kantorovich_eval(*k, f, 0.37, params(10.0)) ==
              doctest::Approx(3.0).epsilon(1e-13));
        CHECK(generalized_sampling_eval(*k, f, 0.37, params(10.0)) ==
              doctest::Approx(3.0).epsilon(1e-13));
    }
    // within the recorded truncation slop otherwise
    for (const auto& spec : {KernelSpec::fejer(), KernelSpec::sigmoidal_phi(1.5)}) {
        const auto k = make_kernel(spec);
        const auto rec = kantorovich_eval_record(*k, f, 0.37, params(10.0));
        CHECK(std::abs(rec.value - 3.0) <= rec.tail_bound + 1e-10);
        CHECK(rec.tail_bound < 0.05);
    }
}

TEST_CASE("jump values: compound kernel plateau and Fejer lattice limit") {
    const auto compound = make_kernel(KernelSpec::compound_bspline(2, 0.3));
    const auto step = Signal::heaviside(1.0);
    // w t = 10.5 off the lattice: exactly alpha f(t+0) + (1-alpha) f(t-0)
    CHECK(kantorovich_eval(*compound, step, 1.0, params(10.5)) ==
          doctest::Approx(0.3).epsilon(1e-13));

    const auto fejer = make_kernel(KernelSpec::fejer());
    // frozen by the lattice-sum oracle: Psi^-(0) + chi(0) = 1/4 + 1/2
    const double expect =
        oracle::psi_minus([&](double x) { return (*fejer)(x); }, 0.0, 2'000'000) + 0.5;
    for (double w : {4.0, 64.0, 1024.0}) {
        const auto rec = kantorovich_eval_record(*fejer, step, 1.0, params(w));
        CHECK(std::abs(rec.value - expect) <= rec.tail_bound + 2e-7);
        CHECK(std::abs(rec.value - 0.75) < 1e-6);
    }
}

TEST_CASE("boundedness: |S_w f| <= ||f|| m_0 + slop (random cases)") {
    oracle::Rng rng(2024);
    const std::vector<KernelPtr> kernels = {
        make_kernel(KernelSpec::bspline(2)),
        make_kernel(KernelSpec::compound_bspline(2, 0.4)),
        make_kernel(KernelSpec::d2()),
        make_kernel(KernelSpec::fejer()),
    };
    std::vector<double> m0;
    for (const auto& k : kernels) m0.push_back(discrete_moment(*k, 0.0, 2000, 64).value);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t ki = static_cast<std::size_t>(rng.integer(0, kernels.size() - 1));
        const auto& k = kernels[ki];
        const double m = m0[ki];
        const auto f = Signal::piecewise(
            {rng.uniform(-1, 1)},
            {Sinusoid{rng.uniform(-2, 2), rng.uniform(0.5, 3), 0.0, rng.uniform(-1, 1)},
             Polynomial{rng.uniform(-2, 2)}});
        const double t = rng.uniform(-3, 3);
        const double w = rng.uniform(0.5, 40.0);
        const auto rec = kantorovich_eval_record(*k, f, t, params(w));
        CHECK(std::abs(rec.value) <= f.sup_norm_bound() * m + rec.tail_bound + 1e-9);
    }
}

TEST_CASE("grid evaluation matches single points bitwise and is deterministic") {
    const auto k = make_kernel(KernelSpec::bspline(3));
    const auto f = Signal::sine();
    std::vector<double> ts;
    for (int i = 0; i <= 200; ++i) ts.push_back(-3.0 + 6.0 * i / 200);
    const auto p = params(64.0);
    const auto grid1 = kantorovich_grid(*k, f, ts, p);
    const auto grid2 = kantorovich_grid(*k, f, ts, p);
    REQUIRE(grid1.size() == ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(grid1[i] == kantorovich_eval(*k, f, ts[i], p)); // bit-identical
        CHECK(grid1[i] == grid2[i]);
    }
    CHECK(kantorovich_grid(*k, Signal::constant(0.0), ts, p) ==
          std::vector<double>(ts.size(), 0.0));
}

TEST_CASE("generalized sampling: linear exactness of the hat kernel") {
    const auto m2 = make_kernel(KernelSpec::bspline(2));
    const auto ident = Signal::polynomial({0.0, 1.0});
    CHECK(generalized_sampling_eval(*m2, ident, 0.5, params(1.0)) ==
          doctest::Approx(0.5).epsilon(1e-14));
    // G_w reads the declared point value on lattice hits
    const auto spiked = Signal::sine().with_point_value(2.0, 7.0);
    const double g = generalized_sampling_eval(*m2, spiked, 2.0, params(1.0));
    CHECK(g == doctest::Approx(7.0).epsilon(1e-12)); // only k = 2 contributes
}

TEST_CASE("Kantorovich vs generalized sampling on sin: both converge, O(1/w) apart") {
    const auto k = make_kernel(KernelSpec::bspline(3));
    const auto f = Signal::sine();
    auto worst_diff = [&](double w) {
        double d = 0.0;
        for (int i = 0; i <= 40; ++i) {
            const double t = -2.0 + 4.0 * i / 40;
            d = std::max(d, std::abs(kantorovich_eval(*k, f, t, params(w)) -
                                     generalized_sampling_eval(*k, f, t, params(w))));
        }
        return d;
    };
    const double d32 = worst_diff(32.0);
    const double d256 = worst_diff(256.0);
    CHECK(d32 < 0.05);
    CHECK(d256 < d32);
    CHECK(d256 <= d32 / 8.0 * 3.0); // O(1/w) with slack
}

TEST_CASE("causal prediction: M2(x-3) uses only the past") {
    const auto causal = make_kernel(KernelSpec::bspline(2, 3.0)); // support [2,4]
    const auto f = Signal::sine();
    oracle::Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const double t = rng.uniform(-4.0, 4.0);
        const double w = rng.uniform(0.5, 60.0);
        const auto p = params(w);
        const auto c = predict_causal(*causal, f, t, p);
        CHECK(c.value == kantorovich_eval(*causal, f, t, p)); // bit-for-bit
        CHECK(static_cast<double>(c.k_hi) / w < t);
        CHECK(static_cast<double>(c.k_hi) <= std::floor(w * t) - 1.0);

        // rewriting the future leaves the prediction bit-identical
        const auto mutated = f.replaced_from(t, Signal::constant(123.0));
        CHECK(predict_causal(*causal, mutated, t, p).value == c.value);
    }
}

TEST_CASE("causal prediction rejects unusable kernels and lattice misses") {
    const auto f = Signal::sine();
    const auto fejer = make_kernel(KernelSpec::fejer());
    CHECK_THROWS_AS((void)predict_causal(*fejer, f, 1.0, params(8.0)), std::invalid_argument);

    const auto twosided = make_kernel(KernelSpec::bspline(2));
    CHECK_THROWS_AS((void)predict_causal(*twosided, f, 1.0, params(8.0)),
                    std::invalid_argument);

    // support [0.25, 2.25] dips under 1: the lattice constraint applies
    const auto low = make_kernel(KernelSpec::bspline(2, 1.25));
    CHECK_THROWS_AS((void)predict_causal(*low, f, 1.0, params(8.3)), std::invalid_argument);
    const auto ok = predict_causal(*low, f, 1.0, params(8.0)); // w t = 8 integer
    CHECK(static_cast<double>(ok.k_hi) / 8.0 < 1.0);
    CHECK(ok.value == kantorovich_eval(*low, f, 1.0, params(8.0)));
}

TEST_CASE("parameter validation") {
    const auto k = make_kernel(KernelSpec::bspline(2));
    const auto f = Signal::constant(1.0);
    CHECK_THROWS_AS((void)kantorovich_eval(*k, f, 0.0, params(0.0)), std::invalid_argument);
    CHECK_THROWS_AS((void)kantorovich_eval(*k, f, 0.0, params(-3.0)), std::invalid_argument);
    CHECK(on_integer_lattice(7.0, 1e-9));
    CHECK(on_integer_lattice(7.0 + 1e-12, 1e-9));
    CHECK_FALSE(on_integer_lattice(7.5, 1e-9));
}
