#include "skop/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skop {

Signal auxiliary_g(const Signal& f, double t) {
    const auto [left, right] = f.one_sided_limits(t);
    return f.minus_side_constants(t, left, right).with_point_value(t, 0.0);
}

JumpDecomposition representation_decompose(const Kernel& k, const Signal& f, double t,
                                   const OperatorParams& p) {
    JumpDecomposition d;
    d.t = t;
    d.w = p.w;
    const double wt = p.w * t;
    d.integer_lattice = on_integer_lattice(wt, p.integer_lattice_tol);
    d.floor_wt = d.integer_lattice ? static_cast<long long>(std::llround(wt))
                                   : static_cast<long long>(std::floor(wt));
    d.fractional = d.integer_lattice ? 0.0 : wt - static_cast<double>(d.floor_wt);

    const auto [left, right] = f.one_sided_limits(t);
    d.left_limit = left;
    d.jump = right - left;

    const auto psi = psi_minus(k, d.integer_lattice ? static_cast<double>(d.floor_wt) : wt,
                               p.truncation);
    d.psi_minus_wt = psi.value;
    d.chi_at_x = k(d.fractional);

    const Signal g = auxiliary_g(f, t);
    const auto gt = kantorovich_eval_record(k, g, t, p);
    d.gt_term = gt.value;

    if (d.integer_lattice) {
        d.reconstructed = d.gt_term + d.jump * (d.psi_minus_wt + d.chi_at_x) + d.left_limit;
    } else {
        d.reconstructed = d.gt_term + d.jump * (d.psi_minus_wt + d.chi_at_x) + d.left_limit -
                          d.chi_at_x * d.fractional * d.jump;
    }

    const auto direct = kantorovich_eval_record(k, f, t, p);
    d.direct = direct.value;
    d.tail_bound = psi.tail_bound + gt.tail_bound + direct.tail_bound;
    return d;
}

LimitValue jump_limit_value(const Kernel& k, const JumpClassification& cls, double left,
                            double right, const LatticeCase& mode,
                            const TruncationPolicy& policy) {
    const double jump = right - left;
    if (cls.kind == JumpClass::Irregular) return NonConvergentLimit{};
    if (cls.kind == JumpClass::ConstantAlpha)
        return cls.alpha * right + (1.0 - cls.alpha) * left;
    switch (mode.kind) {
        case LatticeCaseKind::Integer: {
            const double a0 = psi_minus(k, 0.0, policy).value;
            const double c0 = k(0.0);
            return (a0 + c0) * right + (1.0 - a0 - c0) * left;
        }
        case LatticeCaseKind::Fractional: {
            const double pm = psi_minus(k, mode.x, policy).value;
            return left + jump * (pm + k(mode.x) * (1.0 - mode.x));
        }
        case LatticeCaseKind::Unrestricted: return NonConvergentLimit{};
    }
    return NonConvergentLimit{};
}

ScanReport jump_convergence_scan(const Kernel& k, const Signal& f, double t,
                                 const ScanMode& mode, const OperatorParams& base,
                                 double convergence_tol) {
    ScanReport report;

    std::vector<double> ws;
    LatticeCase lcase;
    if (const auto* im = std::get_if<IntegerLadder>(&mode)) {
        if (t == 0.0)
            throw std::invalid_argument("integer mode is trivial at t = 0 (w t = 0 always)");
        lcase = {LatticeCaseKind::Integer, 0.0};
        report.mode = "integer";
        double w = static_cast<double>(im->q);
        for (int j = 0; j < im->count; ++j, w *= 2.0) ws.push_back(w);
    } else if (const auto* fm = std::get_if<FractionalLadder>(&mode)) {
        if (!(t > 0.0))
            throw std::invalid_argument("fractional mode needs t > 0 to build the ladder");
        if (!(fm->x > 0.0 && fm->x < 1.0))
            throw std::invalid_argument("fractional part must lie in (0,1)");
        lcase = {LatticeCaseKind::Fractional, fm->x};
        report.mode = "fractional";
        long long m = fm->m0;
        for (int j = 0; j < fm->count; ++j, m *= 2)
            ws.push_back((static_cast<double>(m) + fm->x) / t);
    } else {
        const auto& gm = std::get<GeometricLadder>(mode);
        lcase = {LatticeCaseKind::Unrestricted, 0.0};
        report.mode = "unrestricted";
        double w = gm.w0;
        for (int j = 0; j < gm.count; ++j, w *= gm.factor) ws.push_back(w);
    }

    const auto [left, right] = f.one_sided_limits(t);
    if (left == right) {
        report.predicted = left; // removable: the limit is the common value
    } else {
        const auto cls = classify_jump_behavior(k, 512, 1e-8, base.truncation);
        const auto lim = jump_limit_value(k, cls, left, right, lcase, base.truncation);
        if (const double* v = std::get_if<double>(&lim)) report.predicted = *v;
    }

    report.rows.resize(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
        OperatorParams p = base;
        p.w = ws[i];
        const auto dec = representation_decompose(k, f, t, p);
        report.rows[i] = {p.w, dec.fractional, dec.direct, dec.reconstructed, dec.gt_term};
        report.max_representation_residual =
            std::max(report.max_representation_residual, std::abs(dec.direct - dec.reconstructed));
    }

    report.empirical_limit = report.rows.back().direct;
    bool settled = report.rows.size() < 2 ||
                   std::abs(report.rows.back().direct -
                            report.rows[report.rows.size() - 2].direct) <= convergence_tol;
    if (report.predicted)
        settled = settled && std::abs(report.empirical_limit - *report.predicted) <=
                                 convergence_tol;
    report.converged = settled;
    return report;
}

ErrorBound error_bound_thm32(const Kernel& k, const Signal& f, double w, double beta,
                             const MomentEstimate* m_beta, const MomentEstimate* m_zero) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("the bound needs beta in (0,1)");
    if (!f.uniformly_continuous())
        throw std::invalid_argument("the bound needs a uniformly continuous signal");

    MomentEstimate mb_local, m0_local;
    if (!m_beta) {
        mb_local = discrete_moment(k, beta);
        m_beta = &mb_local;
    }
    if (m_beta->diverging)
        throw std::invalid_argument("m_beta diverges for this kernel: bound not applicable");
    if (!m_zero) {
        m0_local = discrete_moment(k, 0.0);
        m_zero = &m0_local;
    }

    ErrorBound b;
    b.beta = beta;
    b.w = w;
    b.m_beta = m_beta->value;
    b.m_zero = m_zero->value;
    b.sup_norm = f.sup_norm_bound();
    const double delta = std::pow(w, -beta);
    b.omega = modulus_of_continuity(f, delta).value;
    b.value = b.omega * (b.m_beta + 2.0 * b.m_zero) +
              std::pow(2.0, beta + 1.0) * b.sup_norm * b.m_beta * delta;
    return b;
}

RateTable rate_experiment(const Kernel& k, const Signal& f, std::span<const double> ws,
                          std::span<const double> grid, const OperatorParams& base,
                          std::optional<double> beta) {
    if (!f.uniformly_continuous())
        throw std::invalid_argument("rate experiment needs a uniformly continuous signal");
    RateTable table;

    MomentEstimate mb, m0;
    if (beta) {
        mb = discrete_moment(k, *beta);
        m0 = discrete_moment(k, 0.0);
    }

    for (double w : ws) {
        OperatorParams p = base;
        p.w = w;
        const auto values = kantorovich_grid(k, f, grid, p);
        double err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            err = std::max(err, std::abs(values[i] - f(grid[i])));
        RateRow row{w, err, std::nullopt};
        if (beta) row.bound = error_bound_thm32(k, f, w, *beta, &mb, &m0).value;
        table.rows.push_back(row);
    }

    // least-squares slope of log err vs log w over the top half of the ladder
    const std::size_t n = table.rows.size();
    const std::size_t lo = n / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = lo; i < n; ++i) {
        const double x = std::log(table.rows[i].w);
        const double y = std::log(std::max(table.rows[i].sup_error, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m >= 2) {
        const double denom = m * sxx - sx * sx;
        table.empirical_order = denom != 0.0 ? -(m * sxy - sx * sy) / denom : 0.0;
    }
    return table;
}

} // namespace skop
