#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace skop::detail {

/// 16-point Gauss-Legendre nodes/weights on [-1, 1], computed once by
/// Newton iteration on P_16 (machine accurate, no hardcoded tables).
struct GaussLegendre16 {
    std::array<double, 16> node{};
    std::array<double, 16> weight{};

    GaussLegendre16() {
        constexpr int n = 16;
        for (int i = 0; i < n / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
                }
                pp = n * (x * p0 - p1) / (x * x - 1.0);
                const double dx = p0 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            node[i] = -x;
            node[n - 1 - i] = x;
            weight[i] = weight[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
        }
    }
};

inline const GaussLegendre16& gl16() {
    static const GaussLegendre16 rule;
    return rule;
}

/// Composite Gauss-Legendre over [a, b] with panels no wider than max_panel.
template <typename F>
double integrate(F&& f, double a, double b, double max_panel = 1.0) {
    if (b <= a) return 0.0;
    const auto& rule = gl16();
    const long long panels = std::max<long long>(1, (long long)std::ceil((b - a) / max_panel));
    const double h = (b - a) / panels;
    double total = 0.0;
    for (long long p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        double acc = 0.0;
        for (int i = 0; i < 16; ++i) acc += rule.weight[i] * f(mid + 0.5 * h * rule.node[i]);
        total += 0.5 * h * acc;
    }
    return total;
}

/// int_a^b f(u) e^{-i v u} du with panels sized to the oscillation.
template <typename F>
std::complex<double> fourier_integral(F&& f, double a, double b, double v) {
    const double panel = std::min(1.0, 2.0 * M_PI / std::max(1.0, std::abs(v)));
    const double re = integrate([&](double u) { return f(u) * std::cos(v * u); }, a, b, panel);
    const double im = integrate([&](double u) { return -f(u) * std::sin(v * u); }, a, b, panel);
    return {re, im};
}

} // namespace skop::detail
