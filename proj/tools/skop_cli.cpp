// skop: sampling Kantorovich operator toolkit
//
// Subcommands:
//   kernel       inspect/validate a kernel (table, conditions, classification, moments)
//   reconstruct  evaluate S_w f (optionally G_w f / causal prediction) on a grid
//   experiment   canned studies: jump-scan | divergence | rate | moments
//
// All outputs are deterministic for a fixed config and seed.

#include "grammar.hpp"

#include <skop/analysis.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace skop;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_usage = 2;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json jnum(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf"; // keep the JSON NaN/inf free
}

struct Csv {
    std::ofstream out;
    Csv(const fs::path& path, const std::vector<std::string>& header) : out(path) {
        if (!out) throw std::runtime_error("cannot write " + path.string());
        for (std::size_t i = 0; i < header.size(); ++i)
            out << (i ? "," : "") << header[i];
        out << "\n";
    }
    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out << (i ? "," : "") << num(values[i]);
        out << "\n";
    }
};

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

TruncationPolicy policy_from_tol(double tol) {
    TruncationPolicy p;
    p.tail_tolerance_decay2 = std::min(1e-8, tol * 1e-2);
    p.tail_tolerance_slow = std::min(1e-6, tol);
    return p;
}

json validation_to_json(const ValidationReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"measured", jnum(c.measured)},
                          {"tolerance", jnum(c.tolerance)},
                          {"pass", c.pass}});
    json fourier = json::array();
    for (const auto& f : rep.fourier)
        fourier.push_back({{"k", f.k},
                           {"re", jnum(f.re)},
                           {"im", jnum(f.im)},
                           {"target", f.target},
                           {"defect", jnum(f.defect)},
                           {"tail_bound", jnum(f.tail_bound)},
                           {"pass", f.pass}});
    return {{"checks", checks},
            {"fourier", fourier},
            {"partition_radius", rep.partition_radius},
            {"u_grid", rep.u_grid},
            {"pass", rep.pass}};
}

json policy_to_json(const TruncationPolicy& p) {
    return {{"tail_tolerance_decay2", p.tail_tolerance_decay2},
            {"tail_tolerance_slow", p.tail_tolerance_slow},
            {"radius_cap", p.radius_cap}};
}

json moment_to_json(const MomentEstimate& m) {
    json ladder = json::array();
    for (const auto& [radius, sup] : m.ladder)
        ladder.push_back({{"radius", radius}, {"partial_sup", jnum(sup)}});
    return {{"beta", m.beta},
            {"value", jnum(m.value)},
            {"diverging", m.diverging},
            {"radius", m.radius},
            {"u_grid", m.u_grid},
            {"last_sup_ratio", jnum(m.last_sup_ratio)},
            {"last_increment_ratio", jnum(m.last_increment_ratio)},
            {"ladder", ladder}};
}

// ---------------------------------------------------------------------------

struct KernelCmd {
    std::string spec;
    std::string table = "-5:5:401";
    bool validate = false;
    bool classify = false;
    std::vector<double> moment_betas;
    long long radius = 100'000;
    int u_grid = 1024;
    double tol = 1e-6;
    std::string out = ".";
};

int run_kernel(const KernelCmd& cmd) {
    const auto spec = cli::parse_kernel_spec(cmd.spec);
    const auto kernel = make_kernel(spec);
    fs::create_directories(cmd.out);
    const auto policy = policy_from_tol(cmd.tol);

    {
        Csv csv(fs::path(cmd.out) / "kernel_table.csv", {"x", "chi", "psi_minus", "psi_plus"});
        for (double x : cli::parse_grid(cmd.table))
            csv.row({x, (*kernel)(x), psi_minus(*kernel, x, policy).value,
                     psi_plus(*kernel, x, policy).value});
    }

    json summary{{"spec", spec.name()}, {"tolerance", cmd.tol}};
    bool pass = true;

    if (cmd.validate) {
        ValidationOptions opts;
        opts.tolerance = cmd.tol;
        opts.u_grid = cmd.u_grid;
        opts.policy = policy;
        const auto rep = validate_kernel(*kernel, opts);
        summary["validation"] = validation_to_json(rep);
        pass = pass && rep.pass;
    }
    if (cmd.classify) {
        const auto c = classify_jump_behavior(*kernel, 512, 1e-8, policy);
        summary["classification"] = {{"kind", to_string(c.kind)},
                                     {"alpha", jnum(c.alpha)},
                                     {"chi_at_zero", jnum(c.chi_at_zero)},
                                     {"psi_variation", jnum(c.psi_variation)},
                                     {"chi_sup_01", jnum(c.chi_sup_01)}};
    }
    if (!cmd.moment_betas.empty()) {
        json moments = json::array();
        for (double beta : cmd.moment_betas)
            moments.push_back(
                moment_to_json(discrete_moment(*kernel, beta, cmd.radius, cmd.u_grid)));
        summary["moments"] = moments;
    }

    summary["pass"] = pass;
    write_json(fs::path(cmd.out) / "validation.json", summary);
    return pass ? exit_ok : exit_check_failed;
}

// ---------------------------------------------------------------------------

struct ReconstructCmd {
    std::string spec;
    std::string signal;
    double w = 0.0;
    std::string grid = "0:1:257";
    bool sampling = false;
    bool causal = false;
    double tol = 1e-6;
    std::string out = ".";
};

int run_reconstruct(const ReconstructCmd& cmd) {
    const auto kernel = make_kernel(cli::parse_kernel_spec(cmd.spec));
    const auto signal = cli::parse_signal_spec(cmd.signal);
    const auto ts = cli::parse_grid(cmd.grid);
    fs::create_directories(cmd.out);

    OperatorParams p;
    p.w = cmd.w;
    p.truncation = policy_from_tol(cmd.tol);

    std::vector<std::string> header{"t", "kantorovich"};
    if (cmd.sampling) header.push_back("generalized");
    header.push_back("signal");
    header.push_back("error");
    if (cmd.causal) {
        header.push_back("k_lo");
        header.push_back("k_hi");
    }
    Csv csv(fs::path(cmd.out) / "reconstruction.csv", header);

    double max_error = 0.0;
    const auto values = kantorovich_grid(*kernel, signal, ts, p);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = ts[i];
        std::vector<double> row{t, values[i]};
        if (cmd.sampling) row.push_back(generalized_sampling_eval(*kernel, signal, t, p));
        row.push_back(signal(t));
        row.push_back(values[i] - signal(t));
        max_error = std::max(max_error, std::abs(values[i] - signal(t)));
        if (cmd.causal) {
            const auto c = predict_causal(*kernel, signal, t, p); // throws on violation
            row.push_back(static_cast<double>(c.k_lo));
            row.push_back(static_cast<double>(c.k_hi));
        }
        csv.row(row);
    }

    write_json(fs::path(cmd.out) / "reconstruction.json",
               {{"spec", kernel->spec().name()},
                {"w", cmd.w},
                {"grid", cmd.grid},
                {"points", ts.size()},
                {"max_error", jnum(max_error)},
                {"tolerance", cmd.tol},
                {"truncation", policy_to_json(p.truncation)}});
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct ExperimentCmd {
    std::string kind;
    std::string spec;
    std::string signal = "heaviside:t=1";
    double t = 1.0;
    std::string mode = "integer";
    std::string ladder = "";
    std::string grid = "0:6.283185307179586:129";
    int count = 10;
    std::vector<double> betas;
    long long radius = 100'000;
    int u_grid = 1024;
    std::optional<double> beta;
    std::string expect = "";
    double x1 = 0.25, x2 = 0.75;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    std::string out = ".";
};

ScanMode parse_mode(const ExperimentCmd& cmd) {
    if (cmd.mode == "integer")
        return IntegerLadder{cli::rational_denominator(cmd.t), cmd.count};
    if (cmd.mode.rfind("fractional=", 0) == 0)
        return FractionalLadder{cli::to_double(cmd.mode.substr(11), "fractional"), cmd.count,
                                8};
    if (cmd.mode == "unrestricted") {
        if (cmd.ladder.empty()) return GeometricLadder{1.0, 2.0, cmd.count};
        const auto ws = cli::parse_ladder(cmd.ladder);
        return GeometricLadder{ws.front(), ws.size() > 1 ? ws[1] / ws[0] : 2.0,
                               static_cast<int>(ws.size())};
    }
    throw cli::ParseError("mode must be integer | fractional=<x> | unrestricted");
}

int run_jump_scan(const ExperimentCmd& cmd) {
    const auto kernel = make_kernel(cli::parse_kernel_spec(cmd.spec));
    const auto signal = cli::parse_signal_spec(cmd.signal);
    OperatorParams p;
    p.truncation = policy_from_tol(cmd.tol);
    const auto rep = jump_convergence_scan(*kernel, signal, cmd.t, parse_mode(cmd), p, cmd.tol);

    fs::create_directories(cmd.out);
    Csv csv(fs::path(cmd.out) / "report.csv",
            {"w", "fractional", "direct", "reconstructed", "gt_term", "limit_distance"});
    for (const auto& r : rep.rows)
        csv.row({r.w, r.fractional, r.direct, r.reconstructed, r.gt_term,
                 rep.predicted ? std::abs(r.direct - *rep.predicted) : 0.0});

    json summary{{"experiment", "jump-scan"},
                 {"spec", kernel->spec().name()},
                 {"t", cmd.t},
                 {"mode", rep.mode},
                 {"empirical_limit", jnum(rep.empirical_limit)},
                 {"converged", rep.converged},
                 {"max_representation_residual", jnum(rep.max_representation_residual)},
                 {"tolerance", cmd.tol},
                 {"truncation", policy_to_json(p.truncation)},
                 {"seed", cmd.seed}};
    if (rep.predicted) summary["predicted_limit"] = jnum(*rep.predicted);
    write_json(fs::path(cmd.out) / "summary.json", summary);
    return rep.converged ? exit_ok : exit_check_failed;
}

int run_divergence(const ExperimentCmd& cmd) {
    const auto kernel = make_kernel(cli::parse_kernel_spec(cmd.spec));
    const auto signal = cli::parse_signal_spec(cmd.signal);
    OperatorParams p;
    p.truncation = policy_from_tol(cmd.tol);

    const auto [left, right] = signal.one_sided_limits(cmd.t);
    const auto cls = classify_jump_behavior(*kernel, 512, 1e-8, p.truncation);

    fs::create_directories(cmd.out);
    Csv csv(fs::path(cmd.out) / "report.csv",
            {"x", "w", "direct", "reconstructed", "closed_form"});
    json branches = json::array();
    double limits[2] = {0.0, 0.0};
    bool closed_forms_ok = true;
    int idx = 0;
    for (double x : {cmd.x1, cmd.x2}) {
        const auto rep = jump_convergence_scan(*kernel, signal, cmd.t,
                                               FractionalLadder{x, cmd.count, 8}, p, cmd.tol);
        const auto closed = jump_limit_value(*kernel, cls, left, right,
                                             {LatticeCaseKind::Fractional, x}, p.truncation);
        const double closed_value = std::get<double>(closed);
        for (const auto& r : rep.rows)
            csv.row({x, r.w, r.direct, r.reconstructed, closed_value});
        limits[idx++] = rep.empirical_limit;
        closed_forms_ok = closed_forms_ok && std::abs(rep.empirical_limit - closed_value) <= cmd.tol;
        branches.push_back({{"x", x},
                            {"empirical_limit", jnum(rep.empirical_limit)},
                            {"closed_form", jnum(closed_value)},
                            {"max_representation_residual", jnum(rep.max_representation_residual)}});
    }

    const double difference = std::abs(limits[0] - limits[1]);
    const bool nonconvergent = difference > 10.0 * cmd.tol;
    const bool pass = closed_forms_ok && nonconvergent;
    write_json(fs::path(cmd.out) / "summary.json",
               {{"experiment", "divergence"},
                {"spec", kernel->spec().name()},
                {"t", cmd.t},
                {"classification", to_string(cls.kind)},
                {"branches", branches},
                {"difference", jnum(difference)},
                {"nonconvergent", nonconvergent},
                {"closed_form_match", closed_forms_ok},
                {"tolerance", cmd.tol},
                {"truncation", policy_to_json(p.truncation)},
                {"seed", cmd.seed},
                {"pass", pass}});
    return pass ? exit_ok : exit_check_failed;
}

int run_rate(const ExperimentCmd& cmd) {
    const auto kernel = make_kernel(cli::parse_kernel_spec(cmd.spec));
    const auto signal = cli::parse_signal_spec(cmd.signal);
    const auto ws = cli::parse_ladder(cmd.ladder.empty() ? "8:1024:2" : cmd.ladder);
    const auto grid = cli::parse_grid(cmd.grid);
    OperatorParams p;
    p.truncation = policy_from_tol(cmd.tol);

    const auto table = rate_experiment(*kernel, signal, ws, grid, p, cmd.beta);

    fs::create_directories(cmd.out);
    Csv csv(fs::path(cmd.out) / "report.csv", {"w", "sup_error", "bound"});
    bool decreasing = true;
    bool bounded = true;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        csv.row({r.w, r.sup_error, r.bound ? *r.bound : 0.0});
        if (i) decreasing = decreasing && r.sup_error < table.rows[i - 1].sup_error;
        if (r.bound) bounded = bounded && r.sup_error <= *r.bound;
    }
    const bool pass = decreasing && bounded;
    json summary{{"experiment", "rate"},
                 {"spec", kernel->spec().name()},
                 {"grid", cmd.grid},
                 {"empirical_order", jnum(table.empirical_order)},
                 {"strictly_decreasing", decreasing},
                 {"tolerance", cmd.tol},
                 {"truncation", policy_to_json(p.truncation)},
                 {"seed", cmd.seed},
                 {"pass", pass}};
    if (cmd.beta) {
        summary["beta"] = *cmd.beta;
        summary["bound_dominates"] = bounded;
    }
    write_json(fs::path(cmd.out) / "summary.json", summary);
    return pass ? exit_ok : exit_check_failed;
}

int run_moments(const ExperimentCmd& cmd) {
    const auto kernel = make_kernel(cli::parse_kernel_spec(cmd.spec));
    if (cmd.betas.empty()) throw cli::ParseError("moments experiment needs --beta values");

    std::vector<std::string> expectations;
    if (!cmd.expect.empty()) {
        for (const auto& e : cli::split_args(cmd.expect)) {
            if (e != "finite" && e != "diverging")
                throw cli::ParseError("--expect entries must be finite|diverging");
            expectations.push_back(e);
        }
        if (expectations.size() != cmd.betas.size())
            throw cli::ParseError("--expect needs one entry per beta");
    }

    fs::create_directories(cmd.out);
    Csv csv(fs::path(cmd.out) / "report.csv", {"beta", "radius", "partial_sup"});
    json moments = json::array();
    bool pass = true;
    for (std::size_t i = 0; i < cmd.betas.size(); ++i) {
        const auto est = discrete_moment(*kernel, cmd.betas[i], cmd.radius, cmd.u_grid);
        for (const auto& [radius, sup] : est.ladder)
            csv.row({est.beta, static_cast<double>(radius), sup});
        auto j = moment_to_json(est);
        if (!expectations.empty()) {
            const bool want_diverging = expectations[i] == "diverging";
            j["expected"] = expectations[i];
            j["matches_expectation"] = est.diverging == want_diverging;
            pass = pass && est.diverging == want_diverging;
        }
        moments.push_back(std::move(j));
    }
    write_json(fs::path(cmd.out) / "summary.json", {{"experiment", "moments"},
                                                    {"spec", kernel->spec().name()},
                                                    {"moments", moments},
                                                    {"seed", cmd.seed},
                                                    {"pass", pass}});
    return pass ? exit_ok : exit_check_failed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sampling Kantorovich operator toolkit"};
    app.require_subcommand(1);

    KernelCmd kc;
    auto* kernel_cmd = app.add_subcommand("kernel", "inspect and validate a kernel");
    kernel_cmd->add_option("--spec", kc.spec, "kernel spec, e.g. compound-bspline:n=2,alpha=0.3")
        ->required();
    kernel_cmd->add_option("--table", kc.table, "table grid lo:hi:n");
    kernel_cmd->add_flag("--validate", kc.validate, "check conditions (chi1)-(chi3)");
    kernel_cmd->add_flag("--classify", kc.classify, "classify jump behavior");
    kernel_cmd->add_option("--moments", kc.moment_betas, "moment orders beta to estimate");
    kernel_cmd->add_option("--radius", kc.radius, "moment truncation radius");
    kernel_cmd->add_option("--u-grid", kc.u_grid, "sup-grid resolution");
    kernel_cmd->add_option("--tol", kc.tol, "validation tolerance");
    kernel_cmd->add_option("--out", kc.out, "output directory");

    ReconstructCmd rc;
    auto* rec_cmd = app.add_subcommand("reconstruct", "evaluate S_w f over a grid");
    rec_cmd->add_option("--spec", rc.spec, "kernel spec")->required();
    rec_cmd->add_option("--signal", rc.signal, "signal spec, e.g. sin or heaviside:t=1")
        ->required();
    rec_cmd->add_option("--w", rc.w, "operator scale w > 0")->required();
    rec_cmd->add_option("--grid", rc.grid, "evaluation grid lo:hi:n");
    rec_cmd->add_flag("--sampling", rc.sampling, "add the generalized sampling column");
    rec_cmd->add_flag("--causal", rc.causal, "prediction from the past (causal kernels)");
    rec_cmd->add_option("--tol", rc.tol, "truncation tolerance");
    rec_cmd->add_option("--out", rc.out, "output directory");

    ExperimentCmd ec;
    auto* exp_cmd = app.add_subcommand("experiment", "canned experiments");
    exp_cmd->add_option("kind", ec.kind, "jump-scan | divergence | rate | moments")
        ->required();
    exp_cmd->add_option("--spec", ec.spec, "kernel spec")->required();
    exp_cmd->add_option("--signal", ec.signal, "signal spec");
    exp_cmd->add_option("--t", ec.t, "evaluation point");
    exp_cmd->add_option("--mode", ec.mode, "integer | fractional=<x> | unrestricted");
    exp_cmd->add_option("--w-ladder", ec.ladder, "lo:hi:factor");
    exp_cmd->add_option("--grid", ec.grid, "evaluation grid lo:hi:n");
    exp_cmd->add_option("--count", ec.count, "ladder length for integer/fractional modes");
    exp_cmd->add_option("--beta", ec.betas, "moment orders (moments) / bound order (rate)");
    exp_cmd->add_option("--radius", ec.radius, "moment truncation radius");
    exp_cmd->add_option("--u-grid", ec.u_grid, "moment sup-grid resolution");
    exp_cmd->add_option("--expect", ec.expect, "finite|diverging per beta (moments)");
    exp_cmd->add_option("--x1", ec.x1, "first fractional part (divergence)");
    exp_cmd->add_option("--x2", ec.x2, "second fractional part (divergence)");
    exp_cmd->add_option("--tol", ec.tol, "experiment tolerance");
    exp_cmd->add_option("--seed", ec.seed, "seed for randomized estimators");
    exp_cmd->add_option("--out", ec.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*kernel_cmd) return run_kernel(kc);
        if (*rec_cmd) return run_reconstruct(rc);
        if (ec.kind == "jump-scan") return run_jump_scan(ec);
        if (ec.kind == "divergence") return run_divergence(ec);
        if (ec.kind == "rate") {
            if (!ec.betas.empty()) ec.beta = ec.betas.front();
            return run_rate(ec);
        }
        if (ec.kind == "moments") return run_moments(ec);
        std::cerr << "unknown experiment '" << ec.kind << "'\n";
        return exit_usage;
    } catch (const cli::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return exit_check_failed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}
