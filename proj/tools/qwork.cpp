// qwork: work distributions and trajectory-coherence duality for driven
// finite-level systems. Subcommands: fig1, report, verify, scan.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "qwork/runner.hpp"

namespace {

struct CliOptions {
    qwork::RunConfig cfg;
    std::string config_path;
    bool with_mixtures = false;
};

void attach_common_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path, "JSON config file; explicit flags win");
    cmd->add_option("--omega0", opt.cfg.omega0, "level splitting (units of g)");
    cmd->add_option("--omega", opt.cfg.omega, "drive frequency");
    cmd->add_option("--t", opt.cfg.t, "protocol duration");
    cmd->add_option("--theta", opt.cfg.theta, "initial state angle in [0, pi/2]")
        ->check(CLI::Range(0.0, qwork::pi / 2.0));
    cmd->add_option("--scheme", opt.cfg.scheme, "measurement scheme: gaussian | projective");
    cmd->add_option("--sigma", opt.cfg.sigma, "measurement error (gaussian scheme)");
    cmd->add_option("--sigma-min", opt.cfg.sigma_min, "sweep grid lower end");
    cmd->add_option("--sigma-max", opt.cfg.sigma_max, "sweep grid upper end");
    cmd->add_option("--sigma-points", opt.cfg.sigma_points, "sweep grid size");
    cmd->add_option("--out", opt.cfg.out, "output path (directory for fig1)");
    cmd->add_option("--format", opt.cfg.format, "output format: csv | json");
    cmd->add_option("--tol-propagator", opt.cfg.tol_propagator, "propagator tolerance");
    cmd->add_option("--tol-quadrature", opt.cfg.tol_quadrature, "quadrature tolerance");
}

// Config file first, then explicit flags on top.
void finalize_config(const CLI::App* cmd, CliOptions& opt) {
    qwork::RunConfig from_file;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) throw qwork::config_error("cannot read config file: " + opt.config_path);
        qwork::json j;
        try {
            in >> j;
        } catch (const std::exception& err) {
            throw qwork::config_error(std::string("malformed config file: ") + err.what());
        }
        qwork::config_from_json(j, from_file);
        for (const std::string flag :
             {"--omega0", "--omega", "--t", "--theta", "--scheme", "--sigma", "--sigma-min",
              "--sigma-max", "--sigma-points", "--out", "--format", "--tol-propagator",
              "--tol-quadrature"}) {
            if (cmd->count(flag) == 0) continue;
            from_file.theta_set |= flag == "--theta";
            from_file.sigma_set |= flag == "--sigma";
        }
        // flags win: copy explicitly-set command line values over the file
        qwork::RunConfig merged = from_file;
        if (cmd->count("--omega0")) merged.omega0 = opt.cfg.omega0;
        if (cmd->count("--omega")) merged.omega = opt.cfg.omega;
        if (cmd->count("--t")) merged.t = opt.cfg.t;
        if (cmd->count("--theta")) merged.theta = opt.cfg.theta;
        if (cmd->count("--scheme")) merged.scheme = opt.cfg.scheme;
        if (cmd->count("--sigma")) merged.sigma = opt.cfg.sigma;
        if (cmd->count("--sigma-min")) merged.sigma_min = opt.cfg.sigma_min;
        if (cmd->count("--sigma-max")) merged.sigma_max = opt.cfg.sigma_max;
        if (cmd->count("--sigma-points")) merged.sigma_points = opt.cfg.sigma_points;
        if (cmd->count("--out")) merged.out = opt.cfg.out;
        if (cmd->count("--format")) merged.format = opt.cfg.format;
        if (cmd->count("--tol-propagator")) merged.tol_propagator = opt.cfg.tol_propagator;
        if (cmd->count("--tol-quadrature")) merged.tol_quadrature = opt.cfg.tol_quadrature;
        merged.theta_set = from_file.theta_set || cmd->count("--theta") > 0;
        merged.sigma_set = from_file.sigma_set || cmd->count("--sigma") > 0;
        opt.cfg = merged;
    } else {
        opt.cfg.theta_set = cmd->count("--theta") > 0;
        opt.cfg.sigma_set = cmd->count("--sigma") > 0;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum work distributions and the trajectory-coherence duality"};
    app.require_subcommand(1);

    CliOptions fig1_opt, report_opt, verify_opt, scan_opt;
    auto* fig1 = app.add_subcommand("fig1", "sweep D_W, V_W, D_W^2+V_W^2 vs sigma, CSV per theta");
    attach_common_flags(fig1, fig1_opt);
    auto* report = app.add_subcommand("report", "duality report for one triple as JSON");
    attach_common_flags(report, report_opt);
    report->add_flag("--with-mixtures", report_opt.with_mixtures,
                     "embed the mixture components in the report");
    auto* verify = app.add_subcommand("verify", "run oracle, proof-chain and bound checks");
    attach_common_flags(verify, verify_opt);
    auto* scan = app.add_subcommand("scan", "minimum-uncertainty scan over (theta, sigma)");
    attach_common_flags(scan, scan_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        if (err.get_exit_code() == 0) return app.exit(err);  // --help
        app.exit(err);
        return 2;
    }

    try {
        if (fig1->parsed()) {
            finalize_config(fig1, fig1_opt);
            const auto files = qwork::cmd_fig1(fig1_opt.cfg);
            for (const auto& f : files) std::cout << f.string() << "\n";
            return 0;
        }
        if (report->parsed()) {
            finalize_config(report, report_opt);
            const std::string text = qwork::cmd_report(report_opt.cfg, report_opt.with_mixtures);
            if (report_opt.cfg.out.empty()) std::cout << text;
            return 0;
        }
        if (scan->parsed()) {
            finalize_config(scan, scan_opt);
            const std::string text = qwork::cmd_scan(scan_opt.cfg);
            if (scan_opt.cfg.out.empty()) std::cout << text;
            return 0;
        }
        if (verify->parsed()) {
            finalize_config(verify, verify_opt);
            const auto summary = qwork::cmd_verify(verify_opt.cfg);
            std::cout << qwork::format_summary(summary);
            return summary.all_passed() ? 0 : 1;
        }
    } catch (const qwork::config_error& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 2;
}
