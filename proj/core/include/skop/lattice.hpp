#pragma once

#include "skop/kernel.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace skop {

/// How lattice series over unbounded-support kernels are truncated.
/// The radius is derived from the kernel's declared decay so the omitted
/// mass stays below tail_tolerance; when the radius cap bites first, the
/// achieved bound is recorded in the result (or an error is raised in
/// strict mode). Kernels with closed partial lattice sums are summed at
/// the full required radius regardless of the cap.
struct TruncationPolicy {
    double tail_tolerance_decay2 = 1e-8; // kernels with decay exponent >= 2
    double tail_tolerance_slow = 1e-6;   // decay exponent in (1, 2)
    long long radius_cap = 2'000'000;
    bool strict = false;

    double tolerance_for(double exponent) const {
        return exponent >= 2.0 ? tail_tolerance_decay2 : tail_tolerance_slow;
    }
};

struct LatticeSumResult {
    double value = 0.0;
    long long k_lo = 0;
    long long k_hi = 0;
    double tail_bound = 0.0; // bound on the omitted mass; 0 for exact sums
    bool exact = false;
};

/// Psi^-(x) = sum_{k > x} chi(x - k); 1-periodic up to truncation error.
LatticeSumResult psi_minus(const Kernel& k, double x, const TruncationPolicy& policy = {});

/// Psi^+(x) = sum_{k < x} chi(x - k).
LatticeSumResult psi_plus(const Kernel& k, double x, const TruncationPolicy& policy = {});

/// sum over |x - k| <= radius-of-policy of chi(x - k).
LatticeSumResult partition_sum(const Kernel& k, double u, const TruncationPolicy& policy = {});

/// Default sup grid on [0,1): n equispaced points plus the probe 1 - 2^-20.
std::vector<double> sup_grid(int n);

struct MomentEstimate {
    double beta = 0.0;
    double value = 0.0; // grid-sup of partial sums at the final radius
    bool diverging = false;
    long long radius = 0;
    int u_grid = 0;
    std::vector<std::pair<long long, double>> ladder; // rung radius -> partial sup
    double last_sup_ratio = 1.0;       // sup(R_j) / sup(R_{j-1}) at the last rung
    double last_increment_ratio = 0.0; // ratio of successive ladder increments
};

/// Discrete absolute moment m_beta(chi): sup over u in [0,1) of the
/// radius-truncated sums sum_k |chi(u-k)| |u-k|^beta. Partial sups are
/// snapshotted on a geometric radius ladder; diverging is set when the
/// last ratio of successive ladder increments reaches ~1 (increments scale
/// like 10^(beta-gamma+1) per decade, so < 1 means a summable tail).
/// Needs at least three rungs, i.e. radius >= 1e4, to detect divergence.
/// Divergence is an outcome, never an error.
MomentEstimate discrete_moment(const Kernel& k, double beta, long long radius = 100'000,
                               int u_grid = 1024);

struct ConditionCheck {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct FourierCheck {
    int k = 0;            // mode; tests chi_hat(2 pi k)
    double re = 0.0;
    double im = 0.0;
    double target = 0.0;  // 1 at k = 0, else 0
    double defect = 0.0;  // |chi_hat - target|
    double tail_bound = 0.0;
    bool pass = false;
};

struct ValidationOptions {
    double tolerance = 1e-6;
    int u_grid = 1024;
    int fourier_modes = 3;       // checks k in [-modes, modes]
    double fourier_tolerance = 0.0; // 0: use `tolerance` for compact kernels, 1e-3 otherwise
    // radius for brute-force partition sums of kernels without closed
    // partial sums; oscillating tails put the true defect far below the
    // crude decay bound at this range
    long long partition_radius_cap = 20'000;
    TruncationPolicy policy{};
};

struct ValidationReport {
    std::vector<ConditionCheck> checks; // chi1-bounded, chi1-integrable, chi2-partition
    std::vector<FourierCheck> fourier;  // continuous kernels only
    long long partition_radius = 0;
    int u_grid = 0;
    bool pass = false;
};

/// Numeric validation of the kernel conditions: boundedness on [-1,1],
/// absolute integrability, the truncated partition-of-unity defect over a
/// u-grid, and (for continuous kernels) quadrature checks of
/// chi_hat(2 pi k) ~ {1 at k=0, 0 otherwise}.
ValidationReport validate_kernel(const Kernel& k, const ValidationOptions& opts = {});

enum class JumpClass { ConstantAlpha, IntegerLatticeOnly, NonConvergent, Irregular };

struct JumpClassification {
    JumpClass kind = JumpClass::Irregular;
    double alpha = 0.0;       // ConstantAlpha: the constant; IntegerLatticeOnly: Psi^-(0)
    double chi_at_zero = 0.0;
    double psi_variation = 0.0; // max - min of Psi^- over the grid (diagnostic)
    double chi_sup_01 = 0.0;    // sup |chi| over the [0,1) grid
};

/// Classify how the kernel behaves at jump discontinuities:
///   ConstantAlpha      - chi = 0 on [0,1) and Psi^- constant there: the
///                        operators converge at jumps for every w.
///   NonConvergent      - Psi^- constant on (0,1) but chi not null there:
///                        provably no unrestricted limit.
///   IntegerLatticeOnly - the integer-lattice limit exists (alpha = Psi^-(0)).
///   Irregular          - the partition of unity fails on the grid (not a
///                        kernel in the operating sense).
JumpClassification classify_jump_behavior(const Kernel& k, int grid = 512,
                                          double tolerance = 1e-8,
                                          const TruncationPolicy& policy = {});

const char* to_string(JumpClass c);

/// Half-line Fourier coefficients int_{-inf}^0 and int_0^{+inf} of
/// chi(u) e^{-i 2 pi k u}; for ConstantAlpha kernels these are alpha / 1-alpha
/// at k = 0 and vanish otherwise.
std::pair<std::complex<double>, std::complex<double>> halfline_fourier(const Kernel& k, int mode);

} // namespace skop
