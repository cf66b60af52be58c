#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include <skop/signal.hpp>

#include <cmath>
#include <numbers>

using namespace skop;

TEST_CASE("one-sided limits") {
    const auto h = Signal::heaviside(0.0);
    const auto [l, r] = h.one_sided_limits(0.0);
    CHECK(l == 0.0);
    CHECK(r == 1.0);
    CHECK(h(0.0) == 1.0);

    const auto s = Signal::sine();
    const auto [sl, sr] = s.one_sided_limits(std::numbers::pi);
    CHECK(std::abs(sl) < 1e-15);
    CHECK(sl == sr);

    const auto pw = Signal::step(1.0, 2.0, 5.0);
    const auto [pl, pr] = pw.one_sided_limits(1.0);
    CHECK(pl == 2.0);
    CHECK(pr == 5.0);
    // off the breakpoint both limits agree with the value
    const auto [al, ar] = pw.one_sided_limits(0.25);
    CHECK(al == 2.0);
    CHECK(ar == 2.0);
}

TEST_CASE("mean values: exact cell integrals") {
    const auto c = Signal::constant(3.0);
    CHECK(c.mean_value(-7, 2.5) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(c.mean_value(12, 0.3) == doctest::Approx(3.0).epsilon(1e-15));

    const auto ident = Signal::polynomial({0.0, 1.0});
    CHECK(ident.mean_value(0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));

    const auto h = Signal::heaviside(0.0);
    CHECK(h.mean_value(-1, 2.0) == 0.0); // cell [-1/2, 0) sits left of the jump
    CHECK(h.mean_value(0, 2.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)h.mean_value(0, 0.0), std::invalid_argument);
}

TEST_CASE("means agree with adaptive quadrature (oracle), cells split at breakpoints") {
    oracle::Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        // random piecewise signal with 2 breakpoints
        const double b0 = rng.uniform(-2.0, 0.0);
        const double b1 = b0 + rng.uniform(0.1, 2.0);
        std::vector<Piece> pieces;
        for (int i = 0; i < 3; ++i) {
            if (rng.integer(0, 1)) {
                pieces.push_back(Polynomial{rng.uniform(-2, 2), rng.uniform(-2, 2),
                                            rng.uniform(-1, 1)});
            } else {
                pieces.push_back(
                    Sinusoid{rng.uniform(-2, 2), rng.uniform(0.3, 4.0), rng.uniform(0, 3), 0.0});
            }
        }
        const auto s = Signal::piecewise({b0, b1}, std::move(pieces));
        const double w = rng.uniform(0.5, 8.0);
        const long long k = rng.integer(-10, 10);
        const double expect =
            w * oracle::integrate([&](double x) { return s(x); },
                                  static_cast<double>(k) / w, static_cast<double>(k + 1) / w);
        CHECK(s.mean_value(k, w) == doctest::Approx(expect).epsilon(1e-11));
    }
}

TEST_CASE("modulus of continuity: closed forms and scan oracle") {
    const auto s = Signal::sine();
    // frozen from the dense pair scan: omega_sin(0.1) = 2 sin(0.05)
    const double frozen = 2.0 * std::sin(0.05);
    const auto m = modulus_of_continuity(s, 0.1);
    CHECK(m.exact);
    CHECK(m.value == doctest::Approx(frozen).epsilon(1e-12));
    const double scanned =
        oracle::modulus_scan([&](double x) { return s(x); }, 0.1, -7.0, 7.0, 40000);
    CHECK(std::abs(m.value - scanned) < 1e-6);

    const auto c = Signal::constant(5.0);
    CHECK(modulus_of_continuity(c, 0.7).value == 0.0);

    const auto ramp = Signal::clamped_ramp();
    const auto mr = modulus_of_continuity(ramp, 0.5);
    CHECK(mr.exact);
    CHECK(mr.value == doctest::Approx(0.5));
    CHECK(oracle::modulus_scan([&](double x) { return ramp(x); }, 0.5, -2.0, 3.0) ==
          doctest::Approx(0.5).epsilon(1e-9));

    // signals with jumps are rejected
    CHECK_THROWS_AS((void)modulus_of_continuity(Signal::heaviside(0.0), 0.1),
                    std::invalid_argument);
}

TEST_CASE("modulus estimator: lower estimate flagged, close on a smooth signal") {
    // piecewise polynomial without a recorded closed form
    const auto s = Signal::piecewise(
        {0.0}, {Polynomial{0.0}, Polynomial{0.0, 0.0, 1.0}}); // x^2 clamp... 0 then x^2
    // keep it bounded by restricting to a window via clamps: x^2 grows, so
    // uniform continuity fails formally; use a bounded sinusoid piece
    const auto smooth = Signal::piecewise(
        {0.0}, {Sinusoid{1.0, 2.0, 0.0, 0.0}, Sinusoid{1.0, 2.0, 0.0, 0.0}});
    const auto est = modulus_of_continuity(smooth, 0.25, 20000, 7);
    CHECK_FALSE(est.exact);
    const double truth = 2.0 * std::sin(0.25); // omega of sin(2x) at delta 0.25
    CHECK(est.value <= truth + 1e-12);
    CHECK(est.value > 0.9 * truth);
    (void)s;
}

TEST_CASE("modulus properties: monotone, subadditive-style bound") {
    const auto s = Signal::sine();
    double prev = 0.0;
    for (double delta = 0.05; delta <= 4.0; delta += 0.05) {
        const double v = modulus_of_continuity(s, delta).value;
        CHECK(v >= prev - 1e-15); // nondecreasing
        prev = v;
    }
    for (double lambda : {0.5, 1.0, 2.0, 3.7, 10.0}) {
        for (double delta : {0.05, 0.2, 0.8}) {
            const double lhs = modulus_of_continuity(s, lambda * delta).value;
            const double rhs = (lambda + 1.0) * modulus_of_continuity(s, delta).value;
            CHECK(lhs <= rhs + 1e-12);
        }
    }
}

TEST_CASE("point overrides: measure-zero, limits untouched") {
    const auto s = Signal::sine().with_point_value(std::numbers::pi, 5.0);
    CHECK(s(std::numbers::pi) == 5.0);
    const auto [l, r] = s.one_sided_limits(std::numbers::pi);
    CHECK(std::abs(l) < 1e-15);
    CHECK(std::abs(r) < 1e-15);
    // means ignore the override
    CHECK(s.mean_value(3, 1.0) ==
          doctest::Approx(Signal::sine().mean_value(3, 1.0)).epsilon(1e-15));
    const bool override_recorded = !s.jumps().empty();
    CHECK(override_recorded);
}

TEST_CASE("replaced_from rewrites only the future") {
    const auto base = Signal::sine();
    const auto mutated = base.replaced_from(2.0, Signal::constant(9.0));
    CHECK(mutated(1.99) == doctest::Approx(std::sin(1.99)));
    CHECK(mutated(2.0) == 9.0);
    CHECK(mutated(100.0) == 9.0);
    // past cell means are bit-identical
    CHECK(mutated.mean_value(-3, 2.0) == base.mean_value(-3, 2.0));
    CHECK(mutated.mean_value(2, 2.0) == base.mean_value(2, 2.0)); // [1, 1.5)
}

TEST_CASE("sampled signals: piecewise-constant on [t_i, t_{i+1})") {
    const auto s = Signal::sampled({0.0, 1.0, 2.5}, {1.0, -2.0, 4.0});
    CHECK(s(-5.0) == 1.0);
    CHECK(s(0.5) == 1.0);
    CHECK(s(1.0) == -2.0);
    CHECK(s(2.4999) == -2.0);
    CHECK(s(3.0) == 4.0);
    CHECK(s.jumps().size() == 2);
    CHECK(s.mean_value(0, 1.0) == doctest::Approx(1.0));
    CHECK(s.mean_value(1, 1.0) == doctest::Approx(-2.0));
}

TEST_CASE("sup-norm bounds hold on a grid") {
    const auto s = Signal::piecewise(
        {-1.0, 1.0},
        {Polynomial{2.0}, Polynomial{0.0, 0.5, -1.0}, Sinusoid{3.0, 1.0, 0.5, 0.0}});
    const double bound = s.sup_norm_bound();
    for (double x = -30.0; x <= 30.0; x += 0.01) CHECK(std::abs(s(x)) <= bound);
}
