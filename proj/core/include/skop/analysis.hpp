#pragma once

#include "skop/kernel.hpp"
#include "skop/lattice.hpp"
#include "skop/sampling.hpp"
#include "skop/signal.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace skop {

/// Exact bookkeeping for the representation of (S_w f)(t) at a point of
/// discontinuity through the auxiliary signal g_t:
///   wt not integer:
///     S_w f = S_w g_t + J [Psi^-(wt) + chi(x)] + f(t-0) - chi(x) x J
///   wt integer:
///     S_w f = S_w g_t + J [Psi^-(wt) + chi(0)] + f(t-0)
/// with J = f(t+0) - f(t-0), x = wt - floor(wt).
struct JumpDecomposition {
    double t = 0.0;
    double w = 0.0;
    bool integer_lattice = false;
    long long floor_wt = 0;
    double fractional = 0.0;   // x
    double psi_minus_wt = 0.0; // Psi^-(wt)
    double chi_at_x = 0.0;     // chi(x), or chi(0) on the lattice
    double jump = 0.0;
    double left_limit = 0.0;
    double gt_term = 0.0;       // (S_w g_t)(t)
    double reconstructed = 0.0; // assembled from the formula above
    double direct = 0.0;        // (S_w f)(t) summed directly
    double tail_bound = 0.0;    // truncation slop of the two evaluations
};

/// The auxiliary signal g_t: f - f(t-0) left of t, 0 at t, f - f(t+0)
/// right of t. Bounded and continuous at t whenever f has one-sided limits.
Signal auxiliary_g(const Signal& f, double t);

JumpDecomposition representation_decompose(const Kernel& k, const Signal& f, double t,
                                   const OperatorParams& p);

enum class LatticeCaseKind { Integer, Fractional, Unrestricted };
struct LatticeCase {
    LatticeCaseKind kind = LatticeCaseKind::Unrestricted;
    double x = 0.0; // pinned fractional part for Fractional
};
struct NonConvergentLimit {};
using LimitValue = std::variant<double, NonConvergentLimit>;

/// Limit of (S_w f)(t) at a jump with the given one-sided limits, per the
/// kernel's jump classification and the lattice restriction:
///   constant-alpha kernels: alpha f(t+0) + (1-alpha) f(t-0), any mode;
///   integer lattice: [Psi^-(0)+chi(0)] f(t+0) + [1-Psi^-(0)-chi(0)] f(t-0);
///   pinned fractional part x: f(t-0) + J [Psi^-(x) + chi(x)(1-x)];
///   otherwise non-convergent.
LimitValue jump_limit_value(const Kernel& k, const JumpClassification& cls, double left,
                            double right, const LatticeCase& mode,
                            const TruncationPolicy& policy = {});

struct IntegerLadder {
    long long q = 1; // t = p/q; w_j = q 2^j keeps w t on the lattice
    int count = 11;
};
struct FractionalLadder {
    double x = 0.5; // w_j = (m0 2^j + x)/t pins the fractional part of w t
    int count = 10;
    long long m0 = 8;
};
struct GeometricLadder {
    double w0 = 1.0;
    double factor = 2.0;
    int count = 11;
};
using ScanMode = std::variant<IntegerLadder, FractionalLadder, GeometricLadder>;

struct ScanRow {
    double w = 0.0;
    double fractional = 0.0; // wt - floor(wt) actually realized
    double direct = 0.0;
    double reconstructed = 0.0;
    double gt_term = 0.0;
};

struct ScanReport {
    std::vector<ScanRow> rows;
    std::optional<double> predicted; // nullopt when non-convergent
    double empirical_limit = 0.0;    // last ladder value
    bool converged = false;
    double max_representation_residual = 0.0; // worst |direct - reconstructed|
    std::string mode;
};

/// Evaluate S_w f(t) along a w-ladder built for the requested lattice mode,
/// with the representation-formula reconstruction and the predicted limit.
ScanReport jump_convergence_scan(const Kernel& k, const Signal& f, double t,
                                 const ScanMode& mode, const OperatorParams& base,
                                 double convergence_tol = 1e-6);

struct ErrorBound {
    double beta = 0.0;
    double omega = 0.0;  // omega(f, w^-beta)
    double m_beta = 0.0;
    double m_zero = 0.0;
    double sup_norm = 0.0;
    double w = 0.0;
    double value = 0.0; // omega (m_beta + 2 m_0) + 2^{beta+1} ||f|| m_beta w^-beta
};

/// Quantitative bound on |S_w f - f| for uniformly continuous bounded f and
/// kernels with finite m_beta, 0 < beta < 1. Moments can be passed in to
/// avoid recomputation; otherwise they are measured here.
ErrorBound error_bound_thm32(const Kernel& k, const Signal& f, double w, double beta,
                             const MomentEstimate* m_beta = nullptr,
                             const MomentEstimate* m_zero = nullptr);

struct RateRow {
    double w = 0.0;
    double sup_error = 0.0;
    std::optional<double> bound;
};

struct RateTable {
    std::vector<RateRow> rows;
    double empirical_order = 0.0; // least-squares slope over the top half
};

/// Sup-norm error of S_w f over the grid for each w, with the optional
/// beta-bound column and the empirical convergence order.
RateTable rate_experiment(const Kernel& k, const Signal& f, std::span<const double> ws,
                          std::span<const double> grid, const OperatorParams& base,
                          std::optional<double> beta = std::nullopt);

} // namespace skop
