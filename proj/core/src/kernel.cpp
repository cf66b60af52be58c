#include "skop/kernel.hpp"

#include "skop/detail/trigamma.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

namespace skop {

namespace {

constexpr double pi = std::numbers::pi;

std::string trim_num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

double central_bspline(int n, double x) {
    if (n == 1) {
        // half-open box so that integer translates tile the line exactly
        return (x >= -0.5 && x < 0.5) ? 1.0 : 0.0;
    }
    const double h = 0.5 * n;
    if (x <= -h || x >= h) return 0.0;
    double sum = 0.0;
    double binom = 1.0; // C(n, i)
    for (int i = 0; i <= n; ++i) {
        const double y = h + x - i;
        if (y <= 0.0) break; // later terms only shrink y further
        double p = 1.0;
        for (int j = 0; j < n - 1; ++j) p *= y;
        sum += (i & 1) ? -binom * p : binom * p;
        binom = binom * (n - i) / (i + 1);
    }
    double fact = 1.0;
    for (int j = 2; j <= n - 1; ++j) fact *= j;
    return sum / fact;
}

// ---------------------------------------------------------------------------
// KernelSpec builders

KernelSpec KernelSpec::fejer() {
    KernelSpec s;
    s.family = KernelFamily::Fejer;
    return s;
}
KernelSpec KernelSpec::vallee_poussin() {
    KernelSpec s;
    s.family = KernelFamily::ValleePoussin;
    return s;
}
KernelSpec KernelSpec::mixed_sinc() {
    KernelSpec s;
    s.family = KernelFamily::MixedSinc;
    return s;
}

KernelSpec KernelSpec::bspline(int n, double shift) {
    KernelSpec s;
    s.family = KernelFamily::BSpline;
    s.order = n;
    s.shift = shift;
    return s;
}

KernelSpec KernelSpec::compound_bspline(int n, double alpha) {
    KernelSpec s;
    s.family = KernelFamily::CompoundBSpline;
    s.order = n;
    s.alpha = alpha;
    return s;
}

KernelSpec KernelSpec::c2() {
    KernelSpec s;
    s.family = KernelFamily::C2;
    return s;
}
KernelSpec KernelSpec::step_s() {
    KernelSpec s;
    s.family = KernelFamily::StepS;
    return s;
}
KernelSpec KernelSpec::d2() {
    KernelSpec s;
    s.family = KernelFamily::D2;
    return s;
}

KernelSpec KernelSpec::sigmoidal_phi(double gamma) {
    KernelSpec s;
    s.family = KernelFamily::SigmoidalPhi;
    s.gamma = gamma;
    return s;
}

KernelSpec KernelSpec::mix(std::vector<MixTerm> terms) {
    KernelSpec s;
    s.family = KernelFamily::Mix;
    s.terms = std::move(terms);
    return s;
}

KernelSpec KernelSpec::compound(const KernelSpec& a, const KernelSpec& b, double alpha) {
    auto ka = make_kernel(a);
    auto kb = make_kernel(b);
    const auto* sa = std::get_if<CompactSupport>(&ka->support());
    const auto* sb = std::get_if<CompactSupport>(&kb->support());
    if (!sa || !sb)
        throw std::invalid_argument("compound construction needs compactly supported parts");
    const double ha = std::max(std::abs(sa->lo), std::abs(sa->hi));
    const double hb = std::max(std::abs(sb->lo), std::abs(sb->hi));
    std::vector<MixTerm> terms;
    terms.push_back({1.0 - alpha, std::make_shared<KernelSpec>(a), ha + 1.0});
    terms.push_back({alpha, std::make_shared<KernelSpec>(b), -hb});
    KernelSpec s = mix(std::move(terms));
    s.alpha = alpha;
    return s;
}

std::string KernelSpec::name() const {
    std::string base;
    switch (family) {
        case KernelFamily::Fejer: base = "fejer"; break;
        case KernelFamily::ValleePoussin: base = "vallee-poussin"; break;
        case KernelFamily::MixedSinc: base = "mixed-sinc"; break;
        case KernelFamily::BSpline: base = "bspline:n=" + std::to_string(order); break;
        case KernelFamily::CompoundBSpline:
            base = "compound-bspline:n=" + std::to_string(order) + ",alpha=" + trim_num(alpha);
            break;
        case KernelFamily::C2: base = "c2"; break;
        case KernelFamily::StepS: base = "steps"; break;
        case KernelFamily::D2: base = "d2"; break;
        case KernelFamily::SigmoidalPhi: base = "sigmoidal-phi:gamma=" + trim_num(gamma); break;
        case KernelFamily::Mix: {
            base = "mix(";
            for (size_t i = 0; i < terms.size(); ++i) {
                if (i) base += ";";
                base += trim_num(terms[i].weight) + "*" + terms[i].inner->name() + "@" +
                        trim_num(terms[i].offset);
            }
            base += ")";
            break;
        }
    }
    if (shift != 0.0) base += (base.find(':') == std::string::npos ? ":" : ",");
    if (shift != 0.0) base += "shift=" + trim_num(shift);
    return base;
}

// ---------------------------------------------------------------------------
// Band-limited sinc-type kernels. Values inside |x| < 1e-6 of the removable
// singularity come from the quadratic Taylor term (error below 1e-12 there).

namespace {

class FejerKernel final : public Kernel {
  public:
    FejerKernel()
        : Kernel(KernelSpec::fejer(), PowerDecay{2.0, 2.0 / (pi * pi), 0.5}, true,
                 std::nullopt) {}

    double operator()(double x) const override {
        if (std::abs(x) < 1e-6) return 0.5 - pi * pi * x * x / 24.0;
        const double s = std::sin(0.5 * pi * x);
        return (2.0 / (pi * pi)) * s * s / (x * x);
    }

    std::optional<double> lattice_range_sum(double x, long long klo, long long khi) const override {
        if (khi < klo) return 0.0;
        // sin^2(pi(x-k)/2) is sin^2(pi x/2) for even k and cos^2 for odd k,
        // so each side of the nearest lattice point reduces to trigamma sums.
        const double s = std::sin(0.5 * pi * x);
        const double s2 = s * s;
        const double c2 = 1.0 - s2;
        const double kstar = std::floor(x + 0.5); // nearest k, handled directly
        auto side = [&](double a, double b) -> double {
            if (b < a) return 0.0;
            const double even =
                detail::one_sided_inv_square_sum(0.5 * x, std::ceil(0.5 * a), std::floor(0.5 * b));
            const double odd = detail::one_sided_inv_square_sum(
                0.5 * (x - 1.0), std::ceil(0.5 * (a - 1.0)), std::floor(0.5 * (b - 1.0)));
            return 0.25 * (s2 * even + c2 * odd);
        };
        const double lo = static_cast<double>(klo);
        const double hi = static_cast<double>(khi);
        double sum = (2.0 / (pi * pi)) *
                     (side(lo, std::min(hi, kstar - 1.0)) + side(std::max(lo, kstar + 1.0), hi));
        if (kstar >= lo && kstar <= hi) sum += (*this)(x - kstar);
        return sum;
    }
};

class ValleePoussinKernel final : public Kernel {
  public:
    ValleePoussinKernel()
        : Kernel(KernelSpec::vallee_poussin(), PowerDecay{2.0, 2.0 / pi, 0.5}, true,
                 std::nullopt) {}

    double operator()(double x) const override {
        if (std::abs(x) < 1e-6) return (3.0 / (2.0 * pi)) * (1.0 - 5.0 * x * x / 12.0);
        return (2.0 / pi) * std::sin(0.5 * x) * std::sin(1.5 * x) / (x * x);
    }
};

class MixedSincKernel final : public Kernel {
  public:
    MixedSincKernel()
        : Kernel(KernelSpec::mixed_sinc(), PowerDecay{2.0, 2.0 / (pi * pi), 0.5}, true,
                 std::nullopt) {}

    double operator()(double x) const override {
        if (std::abs(x) < 1e-6) return 1.0 - 5.0 * pi * pi * x * x / 24.0;
        return std::sin(0.5 * pi * x) * std::sin(pi * x) / (0.5 * pi * pi * x * x);
    }
};

// ---------------------------------------------------------------------------
// Duration-limited kernels

class BSplineKernel final : public Kernel {
  public:
    explicit BSplineKernel(int n)
        : Kernel(KernelSpec::bspline(n), CompactSupport{-0.5 * n, 0.5 * n}, n >= 2,
                 std::nullopt),
          n_(n) {}

    double operator()(double x) const override { return central_bspline(n_, x); }

  private:
    int n_;
};

class CompoundBSplineKernel final : public Kernel {
  public:
    CompoundBSplineKernel(int n, double alpha)
        : Kernel(KernelSpec::compound_bspline(n, alpha),
                 CompactSupport{-1.5 * n, 1.5 * n + 1.0}, n >= 2, alpha),
          n_(n), alpha_(alpha) {}

    double operator()(double x) const override {
        return (1.0 - alpha_) * central_bspline(n_, x - n_ - 1.0) +
               alpha_ * central_bspline(n_, x + n_);
    }

  private:
    int n_;
    double alpha_;
};

class C2Kernel final : public Kernel {
  public:
    C2Kernel() : Kernel(KernelSpec::c2(), CompactSupport{-3.0, 3.0}, true, 0.5) {}

    double operator()(double x) const override {
        return 0.5 * (central_bspline(2, x + 2.0) + central_bspline(2, x - 2.0));
    }
};

class StepSKernel final : public Kernel {
  public:
    StepSKernel() : Kernel(KernelSpec::step_s(), CompactSupport{-2.0, 2.0}, false, std::nullopt) {}

    double operator()(double x) const override {
        // nonzero only on the four points +-1, +-2 (exact comparisons intended)
        const double ax = std::abs(x);
        if (ax == 1.0) return 0.5;
        if (ax == 2.0) return -0.5;
        return 0.0;
    }
};

class D2Kernel final : public Kernel {
  public:
    D2Kernel() : Kernel(KernelSpec::d2(), CompactSupport{-3.0, 3.0}, false, 0.5) {}

    double operator()(double x) const override {
        double v = 0.5 * (central_bspline(2, x + 2.0) + central_bspline(2, x - 2.0));
        const double ax = std::abs(x);
        if (ax == 1.0) v += 0.5;
        if (ax == 2.0) v -= 0.5;
        return v;
    }
};

// ---------------------------------------------------------------------------
// Sigmoidal kernel phi_gamma = (1/2)[sigma(x+1) - sigma(x-1)].
//
// sigma approaches its limits 0/1 like |x|^-(gamma-1), which makes the
// difference phi_gamma decay like |x|^-gamma (two-sided power sandwich with
// exponent gamma, hence the discrete moment dichotomy at beta = gamma-1).
// Partial lattice sums telescope, so Psi+- and partition sums are exact.

class SigmoidalPhiKernel final : public Kernel {
  public:
    explicit SigmoidalPhiKernel(double gamma)
        : Kernel(KernelSpec::sigmoidal_phi(gamma),
                 PowerDecay{gamma, (gamma - 1.0) * std::pow(2.0, gamma),
                            std::max(std::pow(2.0, 1.0 / (gamma - 1.0)) + 2.0, 4.0)},
                 true, std::nullopt),
          delta_(gamma - 1.0), brk_(std::pow(2.0, 1.0 / delta_)), slope_(0.25 / brk_) {}

    double sigma(double x) const {
        if (x > brk_) {
            const double p = pow_delta(x);
            return (p + 1.0) / (p + 2.0);
        }
        if (x < -brk_) return 1.0 / (pow_delta(-x) + 2.0);
        return slope_ * x + 0.5;
    }

    double operator()(double x) const override {
        return 0.5 * (sigma(x + 1.0) - sigma(x - 1.0));
    }

    std::optional<double> lattice_range_sum(double x, long long klo, long long khi) const override {
        if (khi < klo) return 0.0;
        // sum_{k=a..b} phi(x-k) = (1/2)[sigma(x-a+1)+sigma(x-a)-sigma(x-b)-sigma(x-b-1)]
        double top, bottom;
        if (klo <= lattice_min) {
            top = 2.0; // sigma(+inf) twice
        } else {
            const double a = static_cast<double>(klo);
            top = sigma(x - a + 1.0) + sigma(x - a);
        }
        if (khi >= lattice_max) {
            bottom = 0.0; // sigma(-inf) twice
        } else {
            const double b = static_cast<double>(khi);
            bottom = sigma(x - b) + sigma(x - b - 1.0);
        }
        return 0.5 * (top - bottom);
    }

  private:
    double pow_delta(double x) const {
        if (delta_ == 0.5) return std::sqrt(x);
        if (delta_ == 1.0) return x;
        return std::pow(x, delta_);
    }

    double delta_;
    double brk_;
    double slope_;
};

// ---------------------------------------------------------------------------
// Wrappers

class ShiftedKernel final : public Kernel {
  public:
    ShiftedKernel(KernelPtr base, KernelSpec spec, double shift)
        : Kernel(std::move(spec), shifted_support(base->support(), shift), base->continuous(),
                 std::nullopt),
          base_(std::move(base)), shift_(shift) {}

    double operator()(double x) const override { return (*base_)(x - shift_); }

    std::optional<double> lattice_range_sum(double x, long long klo, long long khi) const override {
        return base_->lattice_range_sum(x - shift_, klo, khi);
    }

  private:
    static KernelSupport shifted_support(const KernelSupport& s, double shift) {
        if (const auto* c = std::get_if<CompactSupport>(&s))
            return CompactSupport{c->lo + shift, c->hi + shift};
        const auto d = std::get<PowerDecay>(s);
        // |x - shift| >= |x|/2 once |x| >= 2|shift|
        return PowerDecay{d.exponent, d.scale * std::pow(2.0, d.exponent),
                          std::max(2.0 * std::abs(shift) + 2.0, 2.0 * d.onset)};
    }

    KernelPtr base_;
    double shift_;
};

class MixKernel final : public Kernel {
  public:
    MixKernel(KernelSpec spec, std::vector<std::tuple<double, KernelPtr, double>> parts)
        : Kernel(std::move(spec), mixed_support(parts), all_continuous(parts),
                 std::nullopt),
          parts_(std::move(parts)) {}

    double operator()(double x) const override {
        double v = 0.0;
        for (const auto& [w, k, off] : parts_) v += w * (*k)(x - off);
        return v;
    }

    std::optional<double> lattice_range_sum(double x, long long klo, long long khi) const override {
        double v = 0.0;
        for (const auto& [w, k, off] : parts_) {
            auto s = k->lattice_range_sum(x - off, klo, khi);
            if (!s) return std::nullopt;
            v += w * *s;
        }
        return v;
    }

  private:
    using Parts = std::vector<std::tuple<double, KernelPtr, double>>;

    static bool all_continuous(const Parts& parts) {
        for (const auto& [w, k, off] : parts)
            if (!k->continuous()) return false;
        return true;
    }

    static KernelSupport mixed_support(const Parts& parts) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        bool compact = true;
        for (const auto& [w, k, off] : parts) {
            if (const auto* c = std::get_if<CompactSupport>(&k->support())) {
                lo = std::min(lo, c->lo + off);
                hi = std::max(hi, c->hi + off);
            } else {
                compact = false;
            }
        }
        if (compact) return CompactSupport{lo, hi};
        // conservative envelope for decaying parts
        double expo = std::numeric_limits<double>::infinity();
        double scale = 0.0, onset = 2.0;
        for (const auto& [w, k, off] : parts) {
            if (const auto* d = std::get_if<PowerDecay>(&k->support())) {
                expo = std::min(expo, d->exponent);
                scale += std::abs(w) * d->scale;
                onset = std::max(onset, 2.0 * (std::abs(off) + d->onset));
            } else {
                const auto& c = std::get<CompactSupport>(k->support());
                onset = std::max(onset,
                                 std::abs(off) + std::max(std::abs(c.lo), std::abs(c.hi)) + 1.0);
            }
        }
        return PowerDecay{expo, scale * std::pow(2.0, expo), onset};
    }

    Parts parts_;
};

} // namespace

KernelPtr make_kernel(const KernelSpec& spec) {
    KernelPtr base;
    switch (spec.family) {
        case KernelFamily::Fejer: base = std::make_shared<FejerKernel>(); break;
        case KernelFamily::ValleePoussin: base = std::make_shared<ValleePoussinKernel>(); break;
        case KernelFamily::MixedSinc: base = std::make_shared<MixedSincKernel>(); break;
        case KernelFamily::BSpline:
            if (spec.order < 1) throw std::invalid_argument("B-spline order must be >= 1");
            base = std::make_shared<BSplineKernel>(spec.order);
            break;
        case KernelFamily::CompoundBSpline:
            if (spec.order < 1) throw std::invalid_argument("B-spline order must be >= 1");
            base = std::make_shared<CompoundBSplineKernel>(spec.order, spec.alpha);
            break;
        case KernelFamily::C2: base = std::make_shared<C2Kernel>(); break;
        case KernelFamily::StepS: base = std::make_shared<StepSKernel>(); break;
        case KernelFamily::D2: base = std::make_shared<D2Kernel>(); break;
        case KernelFamily::SigmoidalPhi:
            if (!(spec.gamma > 1.0 && spec.gamma <= 2.0))
                throw std::invalid_argument("sigmoidal-phi gamma must lie in (1, 2]");
            base = std::make_shared<SigmoidalPhiKernel>(spec.gamma);
            break;
        case KernelFamily::Mix: {
            if (spec.terms.empty()) throw std::invalid_argument("mix kernel needs terms");
            std::vector<std::tuple<double, KernelPtr, double>> parts;
            for (const auto& t : spec.terms) {
                if (!t.inner) throw std::invalid_argument("mix term missing inner spec");
                if (!std::isfinite(t.weight) || !std::isfinite(t.offset))
                    throw std::invalid_argument("mix term weight/offset must be finite");
                parts.emplace_back(t.weight, make_kernel(*t.inner), t.offset);
            }
            base = std::make_shared<MixKernel>(spec, std::move(parts));
            break;
        }
    }
    if (spec.shift != 0.0) {
        if (!std::isfinite(spec.shift)) throw std::invalid_argument("kernel shift must be finite");
        base = std::make_shared<ShiftedKernel>(base, spec, spec.shift);
    }
    return base;
}

} // namespace skop
