#include "skop/sampling.hpp"

#include "skop/detail/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace skop {

namespace {

struct KRange {
    long long lo;
    long long hi;
    double tail_bound;
};

// lattice indices with chi(wt - k) possibly nonzero, truncated by policy
KRange k_range(const Kernel& k, double wt, double sup_norm, const TruncationPolicy& policy) {
    if (const auto* c = std::get_if<CompactSupport>(&k.support())) {
        return {static_cast<long long>(std::ceil(wt - c->hi)),
                static_cast<long long>(std::floor(wt - c->lo)), 0.0};
    }
    const auto& d = std::get<PowerDecay>(k.support());
    if (d.exponent <= 1.0)
        throw std::invalid_argument(
            "truncation infeasible: declared decay exponent <= 1 has non-summable tails");
    const double tol = policy.tolerance_for(d.exponent);
    const double norm = std::min(sup_norm, 1e12);
    double radius = std::pow(
        2.0 * d.scale * std::max(norm, 1e-12) / ((d.exponent - 1.0) * tol),
        1.0 / (d.exponent - 1.0));
    radius = std::max(radius, d.onset + 1.0);
    if (radius > static_cast<double>(policy.radius_cap)) {
        if (policy.strict)
            throw std::invalid_argument("truncation infeasible under requested tail tolerance");
        radius = static_cast<double>(policy.radius_cap);
    }
    const double tail =
        2.0 * norm * d.scale * std::pow(radius, 1.0 - d.exponent) / (d.exponent - 1.0);
    return {static_cast<long long>(std::ceil(wt - radius)),
            static_cast<long long>(std::floor(wt + radius)), tail};
}

} // namespace

bool on_integer_lattice(double wt, double tol) {
    if (!(tol > 0.0 && tol <= 1e-6))
        throw std::invalid_argument("integer-lattice tolerance must lie in (0, 1e-6]");
    return std::abs(wt - std::round(wt)) < tol * std::max(1.0, std::abs(wt));
}

OperatorEval kantorovich_eval_record(const Kernel& k, const Signal& f, double t,
                                     const OperatorParams& p) {
    if (!(p.w > 0.0)) throw std::invalid_argument("operator scale w must be positive");
    const double wt = p.w * t;
    const auto range = k_range(k, wt, f.sup_norm_bound(), p.truncation);
    double acc = 0.0;
    for (long long kk = range.lo; kk <= range.hi; ++kk) {
        const double weight = k(wt - static_cast<double>(kk));
        if (weight != 0.0) acc += weight * f.mean_value(kk, p.w);
    }
    return {acc, range.lo, range.hi, range.tail_bound};
}

double kantorovich_eval(const Kernel& k, const Signal& f, double t, const OperatorParams& p) {
    return kantorovich_eval_record(k, f, t, p).value;
}

std::vector<double> kantorovich_grid(const Kernel& k, const Signal& f,
                                     std::span<const double> ts, const OperatorParams& p) {
    std::vector<double> out(ts.size());
    detail::parallel_for(ts.size(), [&](std::size_t i) {
        out[i] = kantorovich_eval(k, f, ts[i], p);
    });
    return out;
}

double generalized_sampling_eval(const Kernel& k, const Signal& f, double t,
                                 const OperatorParams& p) {
    if (!(p.w > 0.0)) throw std::invalid_argument("operator scale w must be positive");
    const double wt = p.w * t;
    const auto range = k_range(k, wt, f.sup_norm_bound(), p.truncation);
    double acc = 0.0;
    for (long long kk = range.lo; kk <= range.hi; ++kk) {
        const double weight = k(wt - static_cast<double>(kk));
        if (weight != 0.0) acc += weight * f(static_cast<double>(kk) / p.w);
    }
    return acc;
}

CausalEval predict_causal(const Kernel& k, const Signal& f, double t, const OperatorParams& p) {
    const auto* c = std::get_if<CompactSupport>(&k.support());
    if (!c)
        throw std::invalid_argument("causal prediction needs a compactly supported kernel");
    if (!(c->lo > 0.0))
        throw std::invalid_argument("causal prediction needs supp chi inside (0, +inf)");
    const double wt = p.w * t;
    if (c->lo < 1.0 && !on_integer_lattice(wt, p.integer_lattice_tol))
        throw std::invalid_argument(
            "kernel support meets (0,1): causal evaluation needs w t on the integer lattice");
    const auto rec = kantorovich_eval_record(k, f, t, p);
    // supp chi in (0, inf) forces every contributing index below wt
    long long hi = rec.k_hi;
    for (long long kk = rec.k_lo; kk <= rec.k_hi; ++kk)
        if (static_cast<double>(kk) / p.w >= t && k(wt - static_cast<double>(kk)) != 0.0)
            throw std::logic_error("causality violated: index at or after t contributed");
    return {rec.value, rec.k_lo, hi};
}

} // namespace skop
