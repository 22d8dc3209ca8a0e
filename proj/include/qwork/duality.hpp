#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qwork/parallel.hpp"
#include "qwork/propagator.hpp"
#include "qwork/workdist.hpp"

namespace qwork {

//============================================================================
// Duality quantities: level predictability D_W, coherence effectiveness V_W,
// the bound D_W^2 + V_W^2 <= 1, closed forms for the driven two-level model,
// and the discretized proof chain
//============================================================================

struct DualityProvenance {
    SchemeKind scheme = SchemeKind::Projective;
    double sigma = 0.0;
    int dim = 0;
    std::string note;
};

struct DualityReport {
    double d_w = 0.0;           // predictability of energy levels
    double v_w = 0.0;           // effectiveness of coherence
    double c = 0.0;             // l1 coherence sum_{m!=n} |rho_mn| (split basis)
    double c_trace = 0.0;       // Tr|rho_c|, coincides with c for d=2 pure states
    double c_tilde = 0.0;       // coherence surviving the first measurement
    double d_state = 0.0;       // population-only predictability of the state
    double v_state = 0.0;       // coherence of the state, normalized by d-1
    double bound_residual = 0.0;  // 1 - d_w^2 - v_w^2
    double sum_residual = 0.0;    // sqrt(2) - d_w - v_w
    double survived_coherence_factor = 0.0;
    DualityProvenance provenance;
};

/// D_W = 1/(2(d-1)) * sum over ordered pairs m != n of
/// integral |rho_mm P_m(W) - rho_nn P_n(W)| dW.
inline double predictability(const WorkDecomposition& decomp, const std::vector<double>& rho_diag,
                             double tol, const Tolerances& tols = default_tolerances()) {
    const int d = decomp.dim();
    if (static_cast<int>(rho_diag.size()) != d)
        throw contract_violation("predictability: population vector has wrong length");
    double total = 0.0;
    for (double p : rho_diag) total += p;
    if (std::abs(total - 1.0) > 1e-9)
        throw contract_violation("predictability: population vector not normalized");
    if (d == 1) return 1.0;

    double acc = 0.0;
    for (int m = 0; m < d; ++m) {
        for (int n = m + 1; n < d; ++n) {
            MixtureDistribution diff;
            for (const auto& c : decomp.per_level[m].components)
                diff.components.push_back({rho_diag[m] * c.weight, c.mean, c.width});
            for (const auto& c : decomp.per_level[n].components)
                diff.components.push_back({-rho_diag[n] * c.weight, c.mean, c.width});
            acc += 2.0 * integrate_abs(diff, tol, tols);  // (m,n) and (n,m) are equal
        }
    }
    return acc / (2.0 * (d - 1));
}

/// V_W = 1/(d-1) * integral |P_c(W)| dW.
inline double effectiveness(const WorkDecomposition& decomp, double tol,
                            const Tolerances& tols = default_tolerances()) {
    const int d = decomp.dim();
    if (d == 1) return 0.0;
    return integrate_abs(decomp.coherent, tol, tols) / (d - 1);
}

/// All duality quantities for one decomposition. Bound violations throw;
/// they are findings, not values to clamp.
inline DualityReport duality_report(const WorkDecomposition& decomp, double tol,
                                    const Tolerances& tols = default_tolerances()) {
    const int d = decomp.dim();
    const Eigen::MatrixXcd& rho = decomp.rho_split_basis;

    DualityReport rep;
    rep.provenance.scheme = decomp.scheme.kind;
    rep.provenance.sigma = decomp.scheme.sigma;
    rep.provenance.dim = d;

    rep.d_w = predictability(decomp, decomp.populations(), tol, tols);
    rep.v_w = effectiveness(decomp, tol, tols);

    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            if (m != n) {
                rep.c += std::abs(rho(m, n));
                rep.c_tilde += std::abs(rho(m, n)) * decomp.pair_factors(m, n);
            }
    Eigen::MatrixXcd rho_c = rho;
    rho_c.diagonal().setZero();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_c, Eigen::EigenvaluesOnly);
    rep.c_trace = es.eigenvalues().cwiseAbs().sum();

    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            if (m != n) rep.d_state += std::abs(rho(m, m).real() - rho(n, n).real());
    rep.d_state /= 2.0 * (d - 1);
    rep.v_state = rep.c / (d - 1);

    rep.bound_residual = 1.0 - rep.d_w * rep.d_w - rep.v_w * rep.v_w;
    rep.sum_residual = std::sqrt(2.0) - rep.d_w - rep.v_w;
    rep.survived_coherence_factor = decomp.survived_coherence_factor;

    const double slack = 1e-9;
    if (rep.d_w < -slack || rep.d_w > 1.0 + slack || rep.v_w > rep.c / (d - 1) + slack ||
        rep.bound_residual < -slack) {
        std::ostringstream os;
        os << "duality bound violated: d_w=" << rep.d_w << " v_w=" << rep.v_w << " c=" << rep.c
           << " bound_residual=" << rep.bound_residual << " scheme="
           << (decomp.scheme.kind == SchemeKind::Gaussian ? "gaussian" : "projective")
           << " sigma=" << decomp.scheme.sigma << " d=" << d;
        throw bound_violation(os.str());
    }
    return rep;
}

//============================================================================
// Closed forms for the driven two-level system
//============================================================================

/// |Psi> = sin(theta)|2> + cos(theta)|1> as a density matrix.
inline Operator two_level_pure_state(double theta) {
    Eigen::Vector2cd psi(std::cos(theta), std::sin(theta));
    return Operator(Eigen::MatrixXcd(psi * psi.adjoint()));
}

/// The erf argument of the closed-form effectiveness is stated without a
/// level index in its source; the resolution procedure below picks the
/// candidate that reproduces the definition-level computation.
struct EpsilonTResolution {
    std::string chosen;                       // candidate name
    double value = 0.0;                       // resolved value at time t
    double max_residual = 0.0;                // winner's residual over the sigma grid
    std::vector<std::pair<std::string, double>> residuals;
};

namespace detail {

inline Eigen::MatrixXcd transition_amplitudes(const DrivenTwoLevel& sched, double t,
                                              const Operator& u) {
    // <eps_m^t | U | n> with |n> the canonical initial levels
    const EigenSystem et = transient_eigensystem(sched, t);
    return et.vectors.adjoint() * u.mat();
}

inline double closed_form_effectiveness_impl(double theta, const DrivenTwoLevel& sched, double t,
                                             double sigma, const Operator& u, double eps_t) {
    const Eigen::MatrixXcd amp = transition_amplitudes(sched, t, u);
    const double sigma_tilde_sq = 2.0 * sigma * sigma;
    const double c_tilde =
        std::abs(std::sin(2.0 * theta)) * std::exp(-sched.omega0 * sched.omega0 / sigma_tilde_sq);
    const double overlap = std::abs((amp(0, 0) * std::conj(amp(0, 1))).real());
    return 2.0 * c_tilde * overlap * std::erf(eps_t / (2.0 * sigma));
}

}  // namespace detail

/// Predictability by direct evaluation of the four-Gaussian absolute
/// integral (transition weights cos^2/sin^2 theta, means eps_m^t -/+ omega0,
/// width sqrt(2) sigma). Independent route from predictability().
inline double closed_form_predictability_2level(double theta, const DrivenTwoLevel& sched,
                                                double t, double sigma, double tol,
                                                const Operator& u,
                                                const Tolerances& tols = default_tolerances()) {
    if (sigma <= 0.0)
        throw contract_violation("closed_form_predictability_2level: sigma must be > 0");
    const EigenSystem et = transient_eigensystem(sched, t);
    const Eigen::MatrixXcd amp = detail::transition_amplitudes(sched, t, u);
    const double width = std::sqrt(2.0) * sigma;
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = std::sin(theta) * std::sin(theta);

    MixtureDistribution mix;
    for (int m = 0; m < 2; ++m) {
        mix.components.push_back(
            {cxd(c2 * std::norm(amp(m, 0)), 0.0), et.values[m] + sched.omega0, width});
        mix.components.push_back(
            {cxd(-s2 * std::norm(amp(m, 1)), 0.0), et.values[m] - sched.omega0, width});
    }
    return integrate_abs(mix, tol, tols);
}

inline double closed_form_predictability_2level(double theta, const DrivenTwoLevel& sched,
                                                double t, double sigma, double tol,
                                                const Tolerances& tols = default_tolerances()) {
    const Operator u = evolve(make_schedule(sched, t), t, tols.propagator).unitary;
    return closed_form_predictability_2level(theta, sched, t, sigma, tol, u, tols);
}

/// Effectiveness from the closed form
///   V_W = 2 C~ |Re <eps_1^t|U|1><2|U^dag|eps_1^t>| erf(eps^t / (2 sigma)),
/// C~ = |sin 2 theta| exp(-omega0^2 / (2 sigma^2)), eps^t resolved to half
/// the final-time gap (equal to the upper transient eigenvalue here).
inline double closed_form_effectiveness_2level(double theta, const DrivenTwoLevel& sched, double t,
                                               double sigma, const Operator& u) {
    if (sigma <= 0.0)
        throw contract_violation("closed_form_effectiveness_2level: sigma must be > 0");
    const EigenSystem et = transient_eigensystem(sched, t);
    const double eps_t = 0.5 * (et.values[1] - et.values[0]);
    return detail::closed_form_effectiveness_impl(theta, sched, t, sigma, u, eps_t);
}

inline double closed_form_effectiveness_2level(double theta, const DrivenTwoLevel& sched, double t,
                                               double sigma,
                                               const Tolerances& tols = default_tolerances()) {
    const Operator u = evolve(make_schedule(sched, t), t, tols.propagator).unitary;
    return closed_form_effectiveness_2level(theta, sched, t, sigma, u);
}

/// Try each candidate for the unsubscripted erf argument against the
/// definition-level effectiveness over a sigma grid; smallest residual wins.
inline EpsilonTResolution resolve_epsilon_t(double theta, const DrivenTwoLevel& sched, double t,
                                            const std::vector<double>& sigma_grid, double tol,
                                            const Tolerances& tols = default_tolerances()) {
    if (sigma_grid.empty())
        throw contract_violation("resolve_epsilon_t: sigma grid must be nonempty");
    const Operator u = evolve(make_schedule(sched, t), t, tols.propagator).unitary;
    const EigenSystem e0 = transient_eigensystem(sched, 0.0);
    const EigenSystem et = transient_eigensystem(sched, t);
    const Operator rho = two_level_pure_state(theta);

    std::vector<std::pair<std::string, double>> candidates = {
        {"half_final_gap", 0.5 * (et.values[1] - et.values[0])},
        {"upper_transient_eigenvalue", et.values[1]},
        {"lower_transient_eigenvalue_abs", std::abs(et.values[0])},
    };

    EpsilonTResolution res;
    double best = -1.0;
    for (const auto& [name, eps] : candidates) {
        double worst = 0.0;
        for (double sigma : sigma_grid) {
            const auto decomp = build_work_distribution(
                rho, e0, et, u, MeasurementScheme::gaussian(sigma), tols);
            const double reference = effectiveness(decomp, tol, tols);
            const double closed =
                detail::closed_form_effectiveness_impl(theta, sched, t, sigma, u, eps);
            worst = std::max(worst, std::abs(closed - reference));
        }
        res.residuals.emplace_back(name, worst);
        if (best < 0.0 || worst < best) {
            best = worst;
            res.chosen = name;
            res.value = eps;
            res.max_residual = worst;
        }
    }
    return res;
}

//============================================================================
// Discretized proof chain for the duality inequality
//============================================================================

struct ProofChainBin {
    double v_k = 0.0;
    double u_k_abs = 0.0;
};

struct ProofChainReport {
    std::vector<ProofChainBin> bins;
    double sum_v = 0.0;
    double d_w_discrete = 0.0;
    double v_w_upper_discrete = 0.0;
    double chain_residual = 0.0;  // 1 - d_w_discrete^2 - v_w_upper_discrete^2
};

/// Evaluate the v_k / |u_k| chain on a uniform work grid: v = (A+B)/2 and
/// |u| = sqrt(AB)/v with A = rho_mm P_m(W_i) dW, B = rho_nn P_n(W_i) dW.
/// Verifies v >= 0, |u| <= 1, sum v <= d-1 and the discrete bound.
inline ProofChainReport proof_chain_check(const WorkDecomposition& decomp,
                                          const std::vector<double>& rho_diag, double delta_w,
                                          double support_lo, double support_hi) {
    const int d = decomp.dim();
    if (delta_w <= 0.0) throw contract_violation("proof_chain_check: delta_w must be > 0");
    if (static_cast<int>(rho_diag.size()) != d)
        throw contract_violation("proof_chain_check: population vector has wrong length");
    for (const auto& lvl : decomp.per_level)
        if (lvl.has_delta())
            throw contract_violation(
                "proof_chain_check: per-level distributions must be pointwise evaluable");
    for (const auto& lvl : decomp.per_level)
        for (const auto& c : lvl.components) {
            if (c.mean - 10.0 * c.width < support_lo || c.mean + 10.0 * c.width > support_hi)
                throw contract_violation("proof_chain_check: support window does not cover mixture");
        }

    const long nbins = static_cast<long>(std::ceil((support_hi - support_lo) / delta_w));
    ProofChainReport rep;
    rep.bins.reserve(static_cast<std::size_t>(nbins) * d * (d - 1));

    std::vector<double> level_density(d);
    double dw_acc = 0.0, vw_acc = 0.0;
    for (long i = 0; i < nbins; ++i) {
        const double w = support_lo + (static_cast<double>(i) + 0.5) * delta_w;
        for (int m = 0; m < d; ++m) level_density[m] = evaluate(decomp.per_level[m], w);
        for (int m = 0; m < d; ++m) {
            for (int n = 0; n < d; ++n) {
                if (m == n) continue;
                const double a = rho_diag[m] * level_density[m] * delta_w;
                const double b = rho_diag[n] * level_density[n] * delta_w;
                const double v = 0.5 * (a + b);
                const double u = v > 0.0 ? std::sqrt(a * b) / v : 0.0;
                if (v < 0.0 || u > 1.0 + 1e-12) {
                    std::ostringstream os;
                    os << "proof_chain_check: invalid bin, v=" << v << " |u|=" << u;
                    throw bound_violation(os.str());
                }
                rep.bins.push_back({v, u});
                rep.sum_v += v;
                dw_acc += 0.5 * std::abs(a - b);       // = v sqrt(1-u^2)
                vw_acc += std::sqrt(a * b);            // = v |u|
            }
        }
    }
    rep.d_w_discrete = dw_acc / (d - 1);
    rep.v_w_upper_discrete = vw_acc / (d - 1);
    rep.chain_residual =
        1.0 - rep.d_w_discrete * rep.d_w_discrete - rep.v_w_upper_discrete * rep.v_w_upper_discrete;

    if (std::abs(rep.sum_v - static_cast<double>(d - 1)) > 1e-3 * (d - 1)) {
        std::ostringstream os;
        os << "proof_chain_check: grid too coarse, sum v = " << rep.sum_v << " expected "
           << (d - 1);
        throw resolution_error(os.str());
    }
    if (rep.sum_v > (d - 1) * (1.0 + 1e-9))
        throw bound_violation("proof_chain_check: sum v exceeds d-1");
    if (rep.chain_residual < -1e-9) {
        std::ostringstream os;
        os << "proof_chain_check: discrete duality bound violated, residual = "
           << rep.chain_residual;
        throw bound_violation(os.str());
    }
    return rep;
}

/// Support window fitting every component of the decomposition (+/- 10 widths).
inline std::pair<double, double> support_window(const WorkDecomposition& decomp) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    auto feed = [&](const MixtureDistribution& dist) {
        for (const auto& c : dist.components) {
            const double a = c.mean - 10.0 * c.width, b = c.mean + 10.0 * c.width;
            if (first) {
                lo = a;
                hi = b;
                first = false;
            } else {
                lo = std::min(lo, a);
                hi = std::max(hi, b);
            }
        }
    };
    for (const auto& lvl : decomp.per_level) feed(lvl);
    feed(decomp.full);
    return {lo, hi};
}

//============================================================================
// Evolved-basis report and the minimum-uncertainty scan
//============================================================================

/// Duality report for the state evolved to the final time, split in the
/// final Hamiltonian's eigenbasis against the conjugated POVM.
inline DualityReport evolved_basis_report(const Operator& rho, const EigenSystem& e0,
                                          const EigenSystem& ht_eigen, const Operator& u,
                                          const MeasurementScheme& scheme, double tol,
                                          const Tolerances& tols = default_tolerances()) {
    const auto decomp = build_evolved_work_distribution(rho, e0, ht_eigen, u, scheme, tols);
    DualityReport rep = duality_report(decomp, tol, tols);
    rep.provenance.note = "evolved_basis";
    return rep;
}

struct ScanRow {
    double theta = 0.0;
    double sigma = 0.0;
    double d_w = 0.0;
    double v_w = 0.0;
    double dw2_plus_vw2 = 0.0;
    double dw_plus_vw = 0.0;
    double c = 0.0;
    double c_tilde = 0.0;
    double bound_residual = 0.0;
    double sum_residual = 0.0;
};

struct ScanTable {
    std::vector<ScanRow> rows;   // theta-major, sigma-minor grid order
    std::size_t argmax_index = 0;  // row maximizing d_w + v_w
};

inline ScanTable min_uncertainty_scan(const DrivenTwoLevel& sched, double t,
                                      const std::vector<double>& theta_grid,
                                      const std::vector<double>& sigma_grid, double tol,
                                      const Tolerances& tols = default_tolerances()) {
    if (theta_grid.empty() || sigma_grid.empty())
        throw contract_violation("min_uncertainty_scan: grids must be nonempty");
    const Operator u = evolve(make_schedule(sched, t), t, tols.propagator).unitary;
    const EigenSystem e0 = transient_eigensystem(sched, 0.0);
    const EigenSystem et = transient_eigensystem(sched, t);

    ScanTable table;
    table.rows.resize(theta_grid.size() * sigma_grid.size());
    parallel_for(table.rows.size(), [&](std::size_t idx) {
        const double theta = theta_grid[idx / sigma_grid.size()];
        const double sigma = sigma_grid[idx % sigma_grid.size()];
        const auto decomp = build_work_distribution(two_level_pure_state(theta), e0, et, u,
                                                    MeasurementScheme::gaussian(sigma), tols);
        const DualityReport rep = duality_report(decomp, tol, tols);
        table.rows[idx] = {theta,
                           sigma,
                           rep.d_w,
                           rep.v_w,
                           rep.d_w * rep.d_w + rep.v_w * rep.v_w,
                           rep.d_w + rep.v_w,
                           rep.c,
                           rep.c_tilde,
                           rep.bound_residual,
                           rep.sum_residual};
    });
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        if (table.rows[i].dw_plus_vw > table.rows[table.argmax_index].dw_plus_vw)
            table.argmax_index = i;
    return table;
}

}  // namespace qwork
