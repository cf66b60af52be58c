#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace skop {

/// offset + amplitude * sin(angular_frequency * x + phase)
struct Sinusoid {
    double amplitude = 1.0;
    double angular_frequency = 1.0;
    double phase = 0.0;
    double offset = 0.0;
};

/// c[0] + c[1] x + c[2] x^2 + ... (global coordinate)
using Polynomial = std::vector<double>;

using Piece = std::variant<Polynomial, Sinusoid>;

struct JumpPoint {
    double t;
    double left;
    double right;
    double value; // declared value at t (overrides included)
};

/// A bounded piecewise closed-form signal: polynomial / sinusoidal /
/// constant pieces on intervals (-inf, b0), [b0, b1), ..., [b_last, +inf),
/// plus optional single-point value overrides (removable discontinuities).
/// One-sided limits and cell mean values are exact antiderivative
/// evaluations, never quadrature. Immutable; queries are pure.
class Signal {
  public:
    Signal(std::vector<double> breakpoints, std::vector<Piece> pieces);

    double operator()(double x) const;

    /// (f(t-0), f(t+0)) read from the piecewise description; point
    /// overrides do not affect limits.
    std::pair<double, double> one_sided_limits(double t) const;

    /// w * int_{k/w}^{(k+1)/w} f(u) du, exact (cells split at breakpoints).
    double mean_value(long long k, double w) const;

    /// Plain integral int_a^b f du, exact.
    double integral(double a, double b) const;

    double sup_norm_bound() const { return sup_norm_; }
    bool uniformly_continuous() const { return uniformly_continuous_; }
    const std::vector<JumpPoint>& jumps() const { return jumps_; }
    bool has_jump_at(double t) const;

    /// Exact modulus of continuity when the builder recorded one.
    std::optional<double> known_modulus(double delta) const;

    /// Copy with f(t) := v (measure-zero change; means and limits unchanged).
    Signal with_point_value(double t, double v) const;

    /// Copy whose description on [t, +inf) is replaced by `g`; the past is
    /// untouched (causality experiments).
    Signal replaced_from(double t, const Signal& g) const;

    /// Copy with constants subtracted per side: f - left_offset on
    /// (-inf, t) and f - right_offset on [t, +inf), with a breakpoint
    /// inserted at t. Point overrides are dropped.
    Signal minus_side_constants(double t, double left_offset, double right_offset) const;

    // builders
    static Signal constant(double c);
    static Signal heaviside(double t0);                    // 0 -> 1, f(t0) = 1
    static Signal step(double t0, double left, double right);
    static Signal sine(double amplitude = 1.0, double angular_frequency = 1.0,
                       double phase = 0.0);
    static Signal polynomial(Polynomial coeffs);
    static Signal clamped_ramp();                          // min(max(x,0),1)
    static Signal piecewise(std::vector<double> breakpoints, std::vector<Piece> pieces);
    /// Sampled data as a piecewise-constant signal on [t_i, t_{i+1});
    /// constant extension outside the sample range.
    static Signal sampled(const std::vector<double>& ts, const std::vector<double>& values);

  private:
    std::size_t piece_index(double x) const;
    void finalize();

    std::vector<double> breakpoints_;
    std::vector<Piece> pieces_;
    std::map<double, double> overrides_;
    std::vector<JumpPoint> jumps_;
    double sup_norm_ = 0.0;
    bool uniformly_continuous_ = true;
    std::function<double(double)> modulus_; // exact closed form when known
};

struct ModulusEstimate {
    double value = 0.0;
    bool exact = false; // false: randomized lower estimate
};

/// omega(f, delta) = sup |f(x)-f(y)| over |x-y| <= delta. Returns the
/// closed form when the signal records one, otherwise a seeded randomized
/// lower estimate over the sampling budget. Signals with jumps are
/// rejected (std::invalid_argument): omega degenerates there.
ModulusEstimate modulus_of_continuity(const Signal& s, double delta,
                                      int sampling_budget = 20000, std::uint64_t seed = 0);

} // namespace skop
