#include "skop/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace skop {

namespace {

double eval_piece(const Piece& p, double x) {
    if (const auto* poly = std::get_if<Polynomial>(&p)) {
        double v = 0.0;
        for (auto it = poly->rbegin(); it != poly->rend(); ++it) v = v * x + *it;
        return v;
    }
    const auto& s = std::get<Sinusoid>(p);
    return s.offset + s.amplitude * std::sin(s.angular_frequency * x + s.phase);
}

// antiderivative, exact per piece
double piece_integral(const Piece& p, double a, double b) {
    if (const auto* poly = std::get_if<Polynomial>(&p)) {
        double va = 0.0, vb = 0.0;
        for (std::size_t j = poly->size(); j-- > 0;) {
            va = va * a + (*poly)[j] / (j + 1.0);
            vb = vb * b + (*poly)[j] / (j + 1.0);
        }
        return vb * b - va * a;
    }
    const auto& s = std::get<Sinusoid>(p);
    if (s.angular_frequency == 0.0)
        return (s.offset + s.amplitude * std::sin(s.phase)) * (b - a);
    const double w = s.angular_frequency;
    return s.offset * (b - a) -
           (s.amplitude / w) * (std::cos(w * b + s.phase) - std::cos(w * a + s.phase));
}

// coarse but honest sup bound of |piece| over [a, b]
double piece_sup(const Piece& p, double a, double b) {
    if (const auto* poly = std::get_if<Polynomial>(&p)) {
        if (poly->size() <= 1) return poly->empty() ? 0.0 : std::abs((*poly)[0]);
        if (std::isinf(a) || std::isinf(b)) return std::numeric_limits<double>::infinity();
        double m = 0.0;
        const int n = 512;
        for (int i = 0; i <= n; ++i)
            m = std::max(m, std::abs(eval_piece(p, a + (b - a) * i / n)));
        return m * (1.0 + 1e-3) + 1e-12;
    }
    const auto& s = std::get<Sinusoid>(p);
    return std::abs(s.offset) + std::abs(s.amplitude);
}


} // namespace

Signal::Signal(std::vector<double> breakpoints, std::vector<Piece> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
    if (pieces_.size() != breakpoints_.size() + 1)
        throw std::invalid_argument("need breakpoints.size()+1 pieces");
    if (!std::is_sorted(breakpoints_.begin(), breakpoints_.end()))
        throw std::invalid_argument("breakpoints must be sorted");
    finalize();
}

void Signal::finalize() {
    jumps_.clear();
    for (double b : breakpoints_) {
        const auto [l, r] = one_sided_limits(b);
        if (l != r) jumps_.push_back({b, l, r, (*this)(b)});
    }
    uniformly_continuous_ = jumps_.empty();
    // outer pieces must individually stay bounded/uniformly continuous
    if (const auto* poly = std::get_if<Polynomial>(&pieces_.front()); poly && poly->size() > 2)
        uniformly_continuous_ = false;
    if (const auto* poly = std::get_if<Polynomial>(&pieces_.back()); poly && poly->size() > 2)
        uniformly_continuous_ = false;

    double sup = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const double a = (i == 0) ? -std::numeric_limits<double>::infinity() : breakpoints_[i - 1];
        const double b = (i == breakpoints_.size()) ? std::numeric_limits<double>::infinity()
                                                    : breakpoints_[i];
        sup = std::max(sup, piece_sup(pieces_[i], a, b));
    }
    sup_norm_ = sup;
}

std::size_t Signal::piece_index(double x) const {
    // piece i covers [breakpoints[i-1], breakpoints[i])
    return std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin();
}

double Signal::operator()(double x) const {
    if (auto it = overrides_.find(x); it != overrides_.end()) return it->second;
    return eval_piece(pieces_[piece_index(x)], x);
}

std::pair<double, double> Signal::one_sided_limits(double t) const {
    // pieces are continuous, so one-sided limits are piece values at t;
    // at a breakpoint the left limit comes from the preceding piece
    const std::size_t right = piece_index(t);
    std::size_t left = right;
    const auto lb = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
    if (lb != breakpoints_.end() && *lb == t) left = lb - breakpoints_.begin();
    return {eval_piece(pieces_[left], t), eval_piece(pieces_[right], t)};
}

double Signal::integral(double a, double b) const {
    if (b < a) return -integral(b, a);
    double acc = 0.0;
    double lo = a;
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), a);
    while (it != breakpoints_.end() && *it < b) {
        acc += piece_integral(pieces_[it - breakpoints_.begin()], lo, *it);
        lo = *it;
        ++it;
    }
    acc += piece_integral(pieces_[it - breakpoints_.begin()], lo, b);
    return acc;
}

double Signal::mean_value(long long k, double w) const {
    if (!(w > 0.0)) throw std::invalid_argument("mean_value needs w > 0");
    const double lo = static_cast<double>(k) / w;
    const double hi = static_cast<double>(k + 1) / w;
    return w * integral(lo, hi);
}

bool Signal::has_jump_at(double t) const {
    for (const auto& j : jumps_)
        if (j.t == t) return true;
    return false;
}

std::optional<double> Signal::known_modulus(double delta) const {
    if (!modulus_) return std::nullopt;
    return modulus_(delta);
}

Signal Signal::with_point_value(double t, double v) const {
    Signal s = *this;
    s.overrides_[t] = v;
    const auto [l, r] = s.one_sided_limits(t);
    if (l == r && l != v) {
        // removable discontinuity: record it without touching the limits
        bool found = false;
        for (auto& j : s.jumps_)
            if (j.t == t) {
                j.value = v;
                found = true;
            }
        if (!found) s.jumps_.push_back({t, l, r, v});
    }
    return s;
}

Signal Signal::replaced_from(double t, const Signal& g) const {
    std::vector<double> bps;
    std::vector<Piece> ps;
    for (std::size_t i = 0; i < breakpoints_.size() && breakpoints_[i] < t; ++i) {
        bps.push_back(breakpoints_[i]);
        ps.push_back(pieces_[i]);
    }
    ps.push_back(pieces_[bps.size()]); // piece active just left of t
    // future from g
    bps.push_back(t);
    const std::size_t gi = g.piece_index(t);
    ps.push_back(g.pieces_[gi]);
    for (std::size_t i = gi; i < g.breakpoints_.size(); ++i) {
        if (g.breakpoints_[i] <= t) continue;
        bps.push_back(g.breakpoints_[i]);
        ps.push_back(g.pieces_[i + 1]);
    }
    Signal out(std::move(bps), std::move(ps));
    for (const auto& [where, v] : overrides_)
        if (where < t) out.overrides_[where] = v;
    return out;
}

Signal Signal::minus_side_constants(double t, double left_offset, double right_offset) const {
    auto shift_piece = [](const Piece& p, double off) -> Piece {
        if (const auto* poly = std::get_if<Polynomial>(&p)) {
            Polynomial q = *poly;
            if (q.empty()) q.push_back(0.0);
            q[0] -= off;
            return q;
        }
        Sinusoid s = std::get<Sinusoid>(p);
        s.offset -= off;
        return s;
    };
    std::vector<double> bps;
    std::vector<Piece> ps;
    std::size_t i = 0;
    for (; i < breakpoints_.size() && breakpoints_[i] < t; ++i) {
        bps.push_back(breakpoints_[i]);
        ps.push_back(shift_piece(pieces_[i], left_offset));
    }
    ps.push_back(shift_piece(pieces_[i], left_offset)); // piece just left of t
    bps.push_back(t);
    ps.push_back(shift_piece(pieces_[piece_index(t)], right_offset));
    for (; i < breakpoints_.size(); ++i) {
        if (breakpoints_[i] <= t) continue;
        bps.push_back(breakpoints_[i]);
        ps.push_back(shift_piece(pieces_[i + 1], right_offset));
    }
    return Signal(std::move(bps), std::move(ps));
}

Signal Signal::constant(double c) {
    Signal s({}, {Polynomial{c}});
    s.modulus_ = [](double) { return 0.0; };
    return s;
}

Signal Signal::heaviside(double t0) { return step(t0, 0.0, 1.0); }

Signal Signal::step(double t0, double left, double right) {
    return Signal({t0}, {Polynomial{left}, Polynomial{right}});
}

Signal Signal::sine(double amplitude, double angular_frequency, double phase) {
    Signal s({}, {Sinusoid{amplitude, angular_frequency, phase, 0.0}});
    const double a = std::abs(amplitude);
    const double w = std::abs(angular_frequency);
    s.modulus_ = [a, w](double delta) {
        const double half = 0.5 * w * delta;
        return half >= 0.5 * M_PI ? 2.0 * a : 2.0 * a * std::sin(half);
    };
    return s;
}

Signal Signal::polynomial(Polynomial coeffs) { return Signal({}, {std::move(coeffs)}); }

Signal Signal::clamped_ramp() {
    Signal s({0.0, 1.0}, {Polynomial{0.0}, Polynomial{0.0, 1.0}, Polynomial{1.0}});
    s.modulus_ = [](double delta) { return std::min(1.0, delta); };
    return s;
}

Signal Signal::piecewise(std::vector<double> breakpoints, std::vector<Piece> pieces) {
    return Signal(std::move(breakpoints), std::move(pieces));
}

Signal Signal::sampled(const std::vector<double>& ts, const std::vector<double>& values) {
    if (ts.size() != values.size() || ts.empty())
        throw std::invalid_argument("sampled signal needs matching nonempty t/value lists");
    if (!std::is_sorted(ts.begin(), ts.end()))
        throw std::invalid_argument("sample times must be sorted");
    std::vector<double> bps(ts.begin(), ts.end());
    std::vector<Piece> ps;
    ps.push_back(Polynomial{values.front()}); // constant extension into the past
    for (double v : values) ps.push_back(Polynomial{v});
    return Signal(std::move(bps), std::move(ps));
}

ModulusEstimate modulus_of_continuity(const Signal& s, double delta, int sampling_budget,
                                      std::uint64_t seed) {
    if (!(delta > 0.0)) throw std::invalid_argument("modulus needs delta > 0");
    if (!s.uniformly_continuous())
        throw std::invalid_argument("modulus of continuity needs a uniformly continuous signal");
    if (auto known = s.known_modulus(delta)) return {*known, true};

    // randomized lower estimate: pairs |x-y| <= delta around random centers,
    // plus a deterministic sweep across the breakpoint region
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double lo = -8.0, hi = 8.0;
    for (const auto& j : s.jumps()) {
        lo = std::min(lo, j.t - 4.0);
        hi = std::max(hi, j.t + 4.0);
    }
    double best = 0.0;
    const int sweeps = std::max(16, sampling_budget / 4);
    for (int i = 0; i < sweeps; ++i) {
        const double x = lo + (hi - lo) * i / (sweeps - 1.0);
        best = std::max(best, std::abs(s(x + delta) - s(x)));
    }
    for (int i = 0; i < sampling_budget; ++i) {
        const double x = lo + (hi - lo) * unit(rng);
        const double y = x + delta * (2.0 * unit(rng) - 1.0);
        best = std::max(best, std::abs(s(x) - s(y)));
    }
    return {best, false};
}

} // namespace skop
