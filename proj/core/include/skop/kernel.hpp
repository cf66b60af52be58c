#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace skop {

/// Support of [lo, hi]; eval returns exactly 0 outside.
struct CompactSupport {
    double lo;
    double hi;
};

/// Unbounded support with a power-law envelope:
/// |chi(x)| <= scale * |x|^-exponent for |x| >= onset.
struct PowerDecay {
    double exponent;
    double scale;
    double onset;
};

using KernelSupport = std::variant<CompactSupport, PowerDecay>;

enum class KernelFamily {
    Fejer,           // (1/2) (sin(pi x/2)/(pi x/2))^2
    ValleePoussin,   // (3/2pi) sin(x/2) sin(3x/2)/(3x^2/4)
    MixedSinc,       // sin(pi x/2) sin(pi x)/(pi^2 x^2/2)
    BSpline,         // central B-spline M_n, support [-n/2, n/2]
    CompoundBSpline, // (1-alpha) M_n(x-n-1) + alpha M_n(x+n)
    C2,              // (1/2)[M_2(x+2) + M_2(x-2)]
    StepS,           // +-1/2 at |x|=1,2; lattice sums vanish identically
    D2,              // C_2 + S
    SigmoidalPhi,    // (1/2)[sigma_g(x+1) - sigma_g(x-1)], power-law sigmoid
    Mix,             // sum_i weight_i * inner_i(x - offset_i)
};

struct KernelSpec {
    KernelFamily family = KernelFamily::Fejer;
    int order = 0;      // BSpline / CompoundBSpline: n >= 1
    double alpha = 0.0; // CompoundBSpline jump parameter
    double gamma = 0.0; // SigmoidalPhi: gamma in (1, 2]
    double shift = 0.0; // evaluate base(x - shift)

    struct MixTerm {
        double weight;
        std::shared_ptr<const KernelSpec> inner;
        double offset;
    };
    std::vector<MixTerm> terms; // Mix only

    static KernelSpec fejer();
    static KernelSpec vallee_poussin();
    static KernelSpec mixed_sinc();
    static KernelSpec bspline(int n, double shift = 0.0);
    static KernelSpec compound_bspline(int n, double alpha);
    static KernelSpec c2();
    static KernelSpec step_s();
    static KernelSpec d2();
    static KernelSpec sigmoidal_phi(double gamma);
    static KernelSpec mix(std::vector<MixTerm> terms);
    /// Duration-limited compound from two compactly supported kernels:
    /// (1-alpha) a(x - ha - 1) + alpha b(x + hb), where ha/hb are the
    /// support half-widths of a and b. Vanishes on [0,1).
    static KernelSpec compound(const KernelSpec& a, const KernelSpec& b, double alpha);

    std::string name() const;
};

/// An evaluable approximation kernel chi with support metadata.
///
/// Instances are immutable after construction; all queries are pure and
/// safe to call concurrently.
class Kernel {
  public:
    virtual ~Kernel() = default;

    virtual double operator()(double x) const = 0;

    const KernelSpec& spec() const { return spec_; }
    const KernelSupport& support() const { return support_; }
    bool continuous() const { return continuous_; }

    /// Jump parameter alpha when the construction guarantees that
    /// Psi^- is constant on [0,1) and chi vanishes there.
    std::optional<double> known_alpha() const { return known_alpha_; }

    bool compact() const { return std::holds_alternative<CompactSupport>(support_); }

    /// Exact value of sum_{k=klo..khi} chi(x - k) for families with closed
    /// partial lattice sums (telescoping sigmoid differences, trigamma sums).
    /// Pass lattice_min/lattice_max for a one- or two-sided infinite range.
    virtual std::optional<double> lattice_range_sum(double /*x*/, long long /*klo*/,
                                                    long long /*khi*/) const {
        return std::nullopt;
    }

    static constexpr long long lattice_min = -(1LL << 62);
    static constexpr long long lattice_max = (1LL << 62);

  protected:
    Kernel(KernelSpec spec, KernelSupport support, bool continuous,
           std::optional<double> known_alpha)
        : spec_(std::move(spec)), support_(support), continuous_(continuous),
          known_alpha_(known_alpha) {}

  private:
    KernelSpec spec_;
    KernelSupport support_;
    bool continuous_;
    std::optional<double> known_alpha_;
};

using KernelPtr = std::shared_ptr<const Kernel>;

/// Build a kernel from its spec. Throws std::invalid_argument when the
/// spec violates its invariants (B-spline order < 1, sigmoid gamma
/// outside (1,2], malformed mix).
KernelPtr make_kernel(const KernelSpec& spec);

/// Central B-spline of order n (support [-n/2, n/2]); exposed for oracles.
double central_bspline(int n, double x);

} // namespace skop
