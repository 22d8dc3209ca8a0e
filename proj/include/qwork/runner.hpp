#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "qwork/json_io.hpp"
#include "qwork/oracle.hpp"
#include "qwork/parallel.hpp"

namespace qwork {

//============================================================================
// Reproducible experiment runner behind the CLI: configuration, sweeps,
// figure-data emission and the self-verification battery
//============================================================================

struct RunConfig {
    double omega0 = 0.01;
    double omega = 0.01;
    double t = 100.0;
    double theta = pi / 4.0;
    bool theta_set = false;  // fig1/scan use the paper's grid unless set
    std::string scheme = "gaussian";
    double sigma = 0.0;
    bool sigma_set = false;
    double sigma_min = 1e-3;
    double sigma_max = 1e2;
    int sigma_points = 60;
    std::string out;  // empty = stdout where applicable
    std::string format = "csv";
    double tol_propagator = 1e-10;
    double tol_quadrature = 1e-9;

    void validate() const {
        if (!(omega0 >= 0.0)) throw config_error("invalid config field omega0: must be >= 0");
        if (!(omega > 0.0)) throw config_error("invalid config field omega: must be > 0");
        if (!(t >= 0.0)) throw config_error("invalid config field t: must be >= 0");
        if (!(theta >= 0.0 && theta <= pi / 2.0))
            throw config_error("invalid config field theta: must be in [0, pi/2]");
        if (scheme != "gaussian" && scheme != "projective")
            throw config_error("invalid config field scheme: expected gaussian or projective");
        if (sigma_set && !(sigma > 0.0))
            throw config_error("invalid config field sigma: must be > 0");
        if (!(sigma_min > 0.0 && sigma_max > sigma_min))
            throw config_error("invalid config field sigma-min/sigma-max: need 0 < min < max");
        if (sigma_points < 2)
            throw config_error("invalid config field sigma-points: must be >= 2");
        if (format != "csv" && format != "json")
            throw config_error("invalid config field format: expected csv or json");
        if (!(tol_propagator > 0.0))
            throw config_error("invalid config field tol-propagator: must be > 0");
        if (!(tol_quadrature > 0.0))
            throw config_error("invalid config field tol-quadrature: must be > 0");
    }

    std::vector<double> sigma_grid() const {
        std::vector<double> grid(sigma_points);
        const double llo = std::log(sigma_min), lhi = std::log(sigma_max);
        for (int i = 0; i < sigma_points; ++i)
            grid[i] = std::exp(llo + (lhi - llo) * i / (sigma_points - 1));
        return grid;
    }

    std::vector<double> theta_grid() const {
        if (theta_set) return {theta};
        return {pi / 16.0, pi / 8.0, pi / 4.0};
    }

    MeasurementScheme measurement() const {
        if (scheme == "projective") return MeasurementScheme::projective();
        if (!sigma_set) throw config_error("invalid config field sigma: required for gaussian scheme");
        return MeasurementScheme::gaussian(sigma);
    }

    DrivenTwoLevel model() const { return DrivenTwoLevel(omega0, omega); }
};

inline json config_to_json(const RunConfig& c) {
    json j;
    j["omega0"] = c.omega0;
    j["omega"] = c.omega;
    j["t"] = c.t;
    if (c.theta_set) j["theta"] = c.theta;
    j["scheme"] = c.scheme;
    if (c.sigma_set) j["sigma"] = c.sigma;
    j["sigma_min"] = c.sigma_min;
    j["sigma_max"] = c.sigma_max;
    j["sigma_points"] = c.sigma_points;
    j["format"] = c.format;
    j["tol_propagator"] = c.tol_propagator;
    j["tol_quadrature"] = c.tol_quadrature;
    return j;
}

inline void config_from_json(const json& j, RunConfig& c) {
    for (const auto& [key, value] : j.items()) {
        if (key == "omega0") c.omega0 = value.get<double>();
        else if (key == "omega") c.omega = value.get<double>();
        else if (key == "t") c.t = value.get<double>();
        else if (key == "theta") { c.theta = value.get<double>(); c.theta_set = true; }
        else if (key == "scheme") c.scheme = value.get<std::string>();
        else if (key == "sigma") { c.sigma = value.get<double>(); c.sigma_set = true; }
        else if (key == "sigma_min") c.sigma_min = value.get<double>();
        else if (key == "sigma_max") c.sigma_max = value.get<double>();
        else if (key == "sigma_points") c.sigma_points = value.get<int>();
        else if (key == "out") c.out = value.get<std::string>();
        else if (key == "format") c.format = value.get<std::string>();
        else if (key == "tol_propagator") c.tol_propagator = value.get<double>();
        else if (key == "tol_quadrature") c.tol_quadrature = value.get<double>();
        else throw config_error("unknown config field: " + key);
    }
}

namespace detail {

inline std::string format_g12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("unwritable output path: " + path.string());
    out << content;
    if (!out) throw config_error("unwritable output path: " + path.string());
}

// Shared state of one (model, t) pipeline; theta and sigma vary per row.
struct PipelineContext {
    DrivenTwoLevel sched;
    EigenSystem e0;
    EigenSystem et;
    Operator u;

    PipelineContext(const RunConfig& cfg)
        : sched(cfg.model()),
          e0(transient_eigensystem(sched, 0.0)),
          et(transient_eigensystem(sched, cfg.t)),
          u(evolve(make_schedule(sched, cfg.t), cfg.t, cfg.tol_propagator).unitary) {}

    WorkDecomposition decompose(double theta, const MeasurementScheme& scheme) const {
        return build_work_distribution(two_level_pure_state(theta), e0, et, u, scheme);
    }
};

}  // namespace detail

//============================================================================
// fig1: D_W, V_W, D_W^2 + V_W^2 versus sigma, one CSV per theta
//============================================================================

inline std::vector<std::filesystem::path> cmd_fig1(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.out.empty()) throw config_error("invalid config field out: fig1 needs a directory");
    const detail::PipelineContext ctx(cfg);
    const auto thetas = cfg.theta_grid();
    const auto sigmas = cfg.sigma_grid();

    std::vector<DualityReport> reports(thetas.size() * sigmas.size());
    parallel_for(reports.size(), [&](std::size_t idx) {
        const double theta = thetas[idx / sigmas.size()];
        const double sigma = sigmas[idx % sigmas.size()];
        const auto decomp = ctx.decompose(theta, MeasurementScheme::gaussian(sigma));
        reports[idx] = duality_report(decomp, cfg.tol_quadrature);
    });

    const std::filesystem::path dir(cfg.out);
    std::vector<std::filesystem::path> files;
    json meta;
    meta["config"] = config_to_json(cfg);
    meta["theta_values"] = thetas;
    json file_list = json::array();

    for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
        std::string body = "sigma,d_w,v_w,dw2_plus_vw2,d_state,v_state\n";
        for (std::size_t si = 0; si < sigmas.size(); ++si) {
            const auto& rep = reports[ti * sigmas.size() + si];
            body += detail::format_g12(sigmas[si]) + "," + detail::format_g12(rep.d_w) + "," +
                    detail::format_g12(rep.v_w) + "," +
                    detail::format_g12(rep.d_w * rep.d_w + rep.v_w * rep.v_w) + "," +
                    detail::format_g12(rep.d_state) + "," + detail::format_g12(rep.v_state) + "\n";
        }
        const auto path = dir / ("fig1_theta_" + std::to_string(ti) + ".csv");
        detail::write_file(path, body);
        files.push_back(path);
        file_list.push_back({{"file", path.filename().string()}, {"theta", thetas[ti]}});
    }
    meta["files"] = std::move(file_list);
    detail::write_file(dir / "fig1_metadata.json", meta.dump(2) + "\n");
    return files;
}

//============================================================================
// report: one DualityReport as JSON
//============================================================================

inline json report_json(const RunConfig& cfg, bool with_mixtures = false) {
    cfg.validate();
    const detail::PipelineContext ctx(cfg);
    const auto decomp = ctx.decompose(cfg.theta, cfg.measurement());
    DualityReport rep = duality_report(decomp, cfg.tol_quadrature);
    json out = report_to_json(rep);
    out["provenance"]["omega0"] = cfg.omega0;
    out["provenance"]["omega"] = cfg.omega;
    out["provenance"]["t"] = cfg.t;
    out["provenance"]["theta"] = cfg.theta;
    out["provenance"]["tol_propagator"] = cfg.tol_propagator;
    out["provenance"]["tol_quadrature"] = cfg.tol_quadrature;
    if (with_mixtures) out["mixtures"] = decomposition_to_json(decomp);
    return out;
}

inline std::string cmd_report(const RunConfig& cfg, bool with_mixtures = false) {
    const std::string text = report_json(cfg, with_mixtures).dump(2) + "\n";
    if (!cfg.out.empty()) detail::write_file(cfg.out, text);
    return text;
}

//============================================================================
// scan: minimum-uncertainty table over (theta, sigma)
//============================================================================

inline std::string cmd_scan(const RunConfig& cfg) {
    cfg.validate();
    const auto table =
        min_uncertainty_scan(cfg.model(), cfg.t, cfg.theta_grid(), cfg.sigma_grid(),
                             cfg.tol_quadrature);
    std::string text;
    if (cfg.format == "json") {
        text = scan_to_json(table).dump(2) + "\n";
    } else {
        text = "theta,sigma,d_w,v_w,c,c_tilde,bound_residual,sum_residual\n";
        for (const auto& r : table.rows)
            text += detail::format_g12(r.theta) + "," + detail::format_g12(r.sigma) + "," +
                    detail::format_g12(r.d_w) + "," + detail::format_g12(r.v_w) + "," +
                    detail::format_g12(r.c) + "," + detail::format_g12(r.c_tilde) + "," +
                    detail::format_g12(r.bound_residual) + "," +
                    detail::format_g12(r.sum_residual) + "\n";
    }
    if (!cfg.out.empty()) detail::write_file(cfg.out, text);
    return text;
}

//============================================================================
// verify: oracle agreement, proof chain, closed forms, bounds
//============================================================================

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::string note;
};

struct VerificationSummary {
    std::vector<CheckResult> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

inline VerificationSummary cmd_verify(const RunConfig& cfg) {
    cfg.validate();
    VerificationSummary summary;
    auto add = [&](std::string name, double residual, double threshold, std::string note = "") {
        summary.checks.push_back(
            {std::move(name), residual, threshold, residual <= threshold, std::move(note)});
    };

    const DrivenTwoLevel sched = cfg.model();
    const double theta = cfg.theta;
    const double sigma_ref = cfg.sigma_set ? cfg.sigma : 0.5;

    // closed-form eigensystem vs numeric solver across the drive period
    {
        double worst = 0.0;
        for (int i = 0; i <= 64; ++i) {
            const double tau = cfg.t * i / 64.0;
            const auto closed = transient_eigensystem(sched, tau);
            const auto numeric = hermitian_eigensystem(hamiltonian_at(sched, tau));
            worst = std::max(worst, std::abs(closed.values[0] - numeric.values[0]));
            worst = std::max(worst, std::abs(closed.values[1] - numeric.values[1]));
            worst = std::max(worst, (closed.vectors - numeric.vectors).norm());
        }
        add("eigensystem-closed-form", worst, 1e-10);
    }

    const detail::PipelineContext ctx(cfg);
    const auto res = evolve(make_schedule(sched, cfg.t), cfg.t, cfg.tol_propagator);
    add("propagator-unitarity", res.unitarity_residual, 1e-9);
    {
        const auto ref = oracle::evolve_ode(make_schedule(sched, cfg.t), cfg.t);
        add("propagator-ode-agreement", frobenius_distance(res.unitary, ref), 1e-8);
    }

    // analytic mixture vs brute-force quadrature marginal
    {
        const auto decomp = ctx.decompose(theta, MeasurementScheme::gaussian(sigma_ref));
        const auto rho = two_level_pure_state(theta);
        const auto grid = oracle::make_grid(ctx.e0, ctx.et, sigma_ref);
        const double lo = ctx.et.values.front() - ctx.e0.values.back() - 6.0 * sigma_ref;
        const double hi = ctx.et.values.back() - ctx.e0.values.front() + 6.0 * sigma_ref;
        double worst = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double w = lo + (hi - lo) * i / 100.0;
            const double mine = evaluate(decomp.full, w);
            const double ref =
                oracle::marginal_work_density(rho, ctx.e0, ctx.et, ctx.u, sigma_ref, grid, w);
            worst = std::max(worst, std::abs(mine - ref));
        }
        add("oracle-marginal-agreement", worst, 1e-6);
    }

    // closed forms against the definition-level routes over a sigma grid
    {
        double worst_d = 0.0, worst_v = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double sigma = std::exp(std::log(0.02) + (std::log(5.0) - std::log(0.02)) * i / 19.0);
            const auto decomp = ctx.decompose(theta, MeasurementScheme::gaussian(sigma));
            const double dw = predictability(decomp, decomp.populations(), cfg.tol_quadrature);
            const double vw = effectiveness(decomp, cfg.tol_quadrature);
            worst_d = std::max(worst_d, std::abs(closed_form_predictability_2level(
                                            theta, sched, cfg.t, sigma, cfg.tol_quadrature,
                                            ctx.u) - dw));
            worst_v = std::max(worst_v, std::abs(closed_form_effectiveness_2level(
                                            theta, sched, cfg.t, sigma, ctx.u) - vw));
        }
        add("closed-form-predictability", worst_d, 1e-6);
        const auto eps = resolve_epsilon_t(theta, sched, cfg.t, {0.05, 0.2, 1.0}, cfg.tol_quadrature);
        add("closed-form-effectiveness", worst_v, 1e-6, "eps_t resolved to " + eps.chosen);
    }

    // discretized proof chain agrees with the integral definition
    {
        const auto decomp = ctx.decompose(theta, MeasurementScheme::gaussian(sigma_ref));
        const auto [lo, hi] = support_window(decomp);
        const auto chain = proof_chain_check(decomp, decomp.populations(), 1e-3, lo, hi);
        const double dw = predictability(decomp, decomp.populations(), cfg.tol_quadrature);
        add("proof-chain-agreement", std::abs(chain.d_w_discrete - dw), 1e-3);
        add("proof-chain-bound", std::max(0.0, -chain.chain_residual), 1e-9);
    }

    // duality bound over the sweep grid
    {
        const auto sigmas = cfg.sigma_grid();
        const auto thetas = cfg.theta_grid();
        std::vector<double> excess(thetas.size() * sigmas.size());
        parallel_for(excess.size(), [&](std::size_t idx) {
            const double th = thetas[idx / sigmas.size()];
            const double sg = sigmas[idx % sigmas.size()];
            const auto rep =
                duality_report(ctx.decompose(th, MeasurementScheme::gaussian(sg)),
                               cfg.tol_quadrature);
            excess[idx] = std::max(0.0, -rep.bound_residual);
        });
        double worst = 0.0;
        for (double e : excess) worst = std::max(worst, e);
        add("duality-bound-sweep", worst, 1e-9);
    }

    // survived coherence: exact 1 at omega0 = 0, destroyed in the sigma -> 0 limit otherwise
    {
        if (cfg.omega0 == 0.0) {
            const auto decomp = ctx.decompose(pi / 4.0, MeasurementScheme::gaussian(sigma_ref));
            add("survived-coherence", std::abs(decomp.survived_coherence_factor - 1.0), 0.0,
                "omega0 = 0: factor must be exactly 1");
        } else {
            const auto decomp = ctx.decompose(pi / 4.0, MeasurementScheme::gaussian(1e-3));
            add("survived-coherence", decomp.survived_coherence_factor, 1e-6,
                "omega0 > 0: factor -> 0 as sigma -> 0");
        }
    }

    return summary;
}

inline std::string format_summary(const VerificationSummary& summary) {
    std::string text;
    for (const auto& c : summary.checks) {
        text += c.passed ? "PASS " : "FAIL ";
        text += c.name + " residual=" + detail::format_g12(c.residual) +
                " threshold=" + detail::format_g12(c.threshold);
        if (!c.note.empty()) text += " (" + c.note + ")";
        text += "\n";
    }
    text += summary.all_passed() ? "all checks passed\n" : "some checks FAILED\n";
    return text;
}

}  // namespace qwork
