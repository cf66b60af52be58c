#pragma once

#include "skop/kernel.hpp"
#include "skop/lattice.hpp"
#include "skop/signal.hpp"

#include <span>
#include <vector>

namespace skop {

struct OperatorParams {
    double w = 1.0;
    TruncationPolicy truncation{};
    double integer_lattice_tol = 1e-9; // relative to max(1, |wt|)
};

/// Is w*t on the integer lattice (within the relative detection tolerance)?
bool on_integer_lattice(double wt, double tol = 1e-9);

struct OperatorEval {
    double value = 0.0;
    long long k_lo = 0;
    long long k_hi = 0;
    double tail_bound = 0.0;
};

/// Sampling Kantorovich operator
///   (S_w f)(t) = sum_k chi(wt - k) [ w int_{k/w}^{(k+1)/w} f ],
/// summed over ascending k; exact finite sum for compact kernels,
/// truncated with a recorded tail bound otherwise.
OperatorEval kantorovich_eval_record(const Kernel& k, const Signal& f, double t,
                                     const OperatorParams& p);
double kantorovich_eval(const Kernel& k, const Signal& f, double t, const OperatorParams& p);

/// Elementwise kantorovich_eval over the grid; parallelized over points,
/// results identical to single-point calls.
std::vector<double> kantorovich_grid(const Kernel& k, const Signal& f,
                                     std::span<const double> ts, const OperatorParams& p);

/// Generalized sampling operator (G_w f)(t) = sum_k f(k/w) chi(wt - k).
double generalized_sampling_eval(const Kernel& k, const Signal& f, double t,
                                 const OperatorParams& p);

struct CausalEval {
    double value = 0.0;
    long long k_lo = 0;
    long long k_hi = 0; // every used index satisfies k/w < t
};

/// Prediction from the past: requires a compactly supported kernel with
/// supp chi in (0, +inf); when the support dips below 1 the lattice
/// constraint wt in Z applies. Throws std::invalid_argument otherwise.
/// The value equals kantorovich_eval bit for bit.
CausalEval predict_causal(const Kernel& k, const Signal& f, double t, const OperatorParams& p);

} // namespace skop
