#pragma once

#include <cmath>
#include <vector>

#include "qwork/mixture.hpp"
#include "qwork/qcore.hpp"

namespace qwork {

//============================================================================
// Work distribution of a (state, process, measurement scheme) triple,
// decomposed into population and coherence contributions
//============================================================================

struct WorkDecomposition {
    MixtureDistribution full;
    MixtureDistribution incoherent;
    MixtureDistribution coherent;
    std::vector<MixtureDistribution> per_level;

    // State expressed in the basis the split was performed in, and the
    // Gaussian damping factor of each pair of first-measurement levels.
    Eigen::MatrixXcd rho_split_basis;
    Eigen::MatrixXd pair_factors;
    double survived_coherence_factor = 0.0;
    MeasurementScheme scheme;

    int dim() const { return static_cast<int>(per_level.size()); }
    std::vector<double> populations() const {
        std::vector<double> p(per_level.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] = rho_split_basis(static_cast<int>(i), static_cast<int>(i)).real();
        return p;
    }
};

namespace detail {

inline void merge_components(std::vector<MixtureComponent>& comps, double mean_tol) {
    std::sort(comps.begin(), comps.end(), [](const MixtureComponent& a, const MixtureComponent& b) {
        if (a.width != b.width) return a.width < b.width;
        return a.mean < b.mean;
    });
    std::vector<MixtureComponent> merged;
    for (const auto& c : comps) {
        if (!merged.empty() && merged.back().width == c.width &&
            c.mean - merged.back().mean <= mean_tol) {
            merged.back().weight += c.weight;
        } else {
            merged.push_back(c);
        }
    }
    comps.clear();
    for (const auto& c : merged)
        if (std::abs(c.weight) != 0.0) comps.push_back(c);
}

inline void validate_triple(const Operator& rho, const EigenSystem& e0, const EigenSystem& et,
                            const Operator& u, const MeasurementScheme& scheme,
                            const Tolerances& tols) {
    const int d = rho.dim();
    if (e0.dim() != d || et.dim() != d || u.dim() != d)
        throw contract_violation("build_work_distribution: dimension mismatch");
    if (!rho.is_density(1e-9))
        throw contract_violation("build_work_distribution: rho is not a density matrix");
    if (!u.is_unitary(tols.unitarity))
        throw contract_violation("build_work_distribution: u is not unitary");
    for (const EigenSystem* sys : {&e0, &et}) {
        const double ortho =
            (sys->vectors.adjoint() * sys->vectors - Eigen::MatrixXcd::Identity(d, d)).norm();
        if (ortho > 1e-10)
            throw contract_violation("build_work_distribution: eigensystem not orthonormal");
    }
    if (scheme.kind == SchemeKind::Gaussian && scheme.sigma <= 0.0)
        throw contract_violation("build_work_distribution: Gaussian scheme needs sigma > 0");
}

inline Eigen::MatrixXd gaussian_pair_factors(const EigenSystem& e0,
                                             const MeasurementScheme& scheme) {
    const int d = e0.dim();
    Eigen::MatrixXd kappa = Eigen::MatrixXd::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        for (int np = 0; np < d; ++np) {
            if (scheme.kind == SchemeKind::Gaussian) {
                const double gap = e0.values[n] - e0.values[np];
                kappa(n, np) = std::exp(-gap * gap / (8.0 * scheme.sigma * scheme.sigma));
            } else {
                kappa(n, np) = (n == np) ? 1.0 : 0.0;
            }
        }
    }
    return kappa;
}

inline double coherence_weighted_factor(const Eigen::MatrixXcd& rho_eig,
                                        const Eigen::MatrixXd& kappa) {
    const int d = static_cast<int>(rho_eig.rows());
    if (d == 2) return kappa(0, 1);
    double c = 0.0, ct = 0.0;
    for (int n = 0; n < d; ++n)
        for (int np = 0; np < d; ++np)
            if (n != np) {
                c += std::abs(rho_eig(n, np));
                ct += std::abs(rho_eig(n, np)) * kappa(n, np);
            }
    return c > 0.0 ? ct / c : 1.0;
}

}  // namespace detail

/// Build the full/incoherent/coherent/per-level work distributions for an
/// initial state rho, initial and final energy eigensystems, a process
/// unitary u and a measurement scheme.
///
/// Gaussian scheme: each index triple (m, n, n') contributes a Gaussian of
/// width sqrt(2)*sigma centered at E^t_m - (E^0_n + E^0_n')/2 with complex
/// weight rho_{nn'} <m|U|n><n'|U^dag|m> exp(-(E^0_n - E^0_n')^2 / (8 sigma^2));
/// the exponential is the cross term left over from completing the square in
/// the product of the two first-measurement amplitudes. Projective scheme:
/// delta components at E^t_m - E^0_n, no coherent part.
inline WorkDecomposition build_work_distribution(const Operator& rho, const EigenSystem& e0,
                                                 const EigenSystem& et, const Operator& u,
                                                 const MeasurementScheme& scheme,
                                                 const Tolerances& tols = default_tolerances()) {
    detail::validate_triple(rho, e0, et, u, scheme, tols);
    const int d = rho.dim();
    const Eigen::MatrixXcd umat = et.vectors.adjoint() * u.mat() * e0.vectors;
    const Eigen::MatrixXcd rho_eig = e0.vectors.adjoint() * rho.mat() * e0.vectors;
    const bool gaussian = scheme.kind == SchemeKind::Gaussian;
    const double width = gaussian ? std::sqrt(2.0) * scheme.sigma : 0.0;

    double scale = 1.0;
    for (double v : e0.values) scale = std::max(scale, std::abs(v));
    for (double v : et.values) scale = std::max(scale, std::abs(v));
    const double merge_tol = tols.delta_merge * scale;

    WorkDecomposition out;
    out.scheme = scheme;
    out.rho_split_basis = rho_eig;
    out.pair_factors = detail::gaussian_pair_factors(e0, scheme);

    out.per_level.resize(d);
    for (int n = 0; n < d; ++n) {
        auto& lvl = out.per_level[n];
        lvl.label = MixtureLabel::PerLevel;
        lvl.level = n;
        for (int m = 0; m < d; ++m) {
            const double p = std::norm(umat(m, n));
            lvl.components.push_back({cxd(p, 0.0), et.values[m] - e0.values[n], width});
        }
        detail::merge_components(lvl.components, merge_tol);
    }

    out.incoherent.label = MixtureLabel::Incoherent;
    for (int n = 0; n < d; ++n) {
        const double pop = rho_eig(n, n).real();
        if (pop == 0.0) continue;
        for (const auto& c : out.per_level[n].components)
            out.incoherent.components.push_back({pop * c.weight, c.mean, c.width});
    }
    detail::merge_components(out.incoherent.components, merge_tol);

    out.coherent.label = MixtureLabel::Coherent;
    if (gaussian) {
        for (int n = 0; n < d; ++n) {
            for (int np = 0; np < d; ++np) {
                if (n == np) continue;
                const cxd rho_nn = rho_eig(n, np);
                if (std::abs(rho_nn) == 0.0) continue;
                const double kappa = out.pair_factors(n, np);
                const double emid = 0.5 * (e0.values[n] + e0.values[np]);
                for (int m = 0; m < d; ++m) {
                    const cxd w = rho_nn * umat(m, n) * std::conj(umat(m, np)) * kappa;
                    out.coherent.components.push_back({w, et.values[m] - emid, width});
                }
            }
        }
        detail::merge_components(out.coherent.components, merge_tol);
    }

    out.full.label = MixtureLabel::Full;
    out.full.components = out.incoherent.components;
    out.full.components.insert(out.full.components.end(), out.coherent.components.begin(),
                               out.coherent.components.end());
    detail::merge_components(out.full.components, merge_tol);

    out.survived_coherence_factor =
        gaussian ? detail::coherence_weighted_factor(rho_eig, out.pair_factors) : 0.0;

    const cxd total = total_weight(out.full);
    if (std::abs(total - cxd(1.0, 0.0)) > 1e-7)
        throw contract_violation("build_work_distribution: full distribution weight != 1");
    return out;
}

/// Same work distribution, but the state evolved to the final time and the
/// split performed in the final Hamiltonian's eigenbasis against the
/// conjugated POVM U M^W U^dag. Pair factors keep the first-measurement
/// damping semantics (they are a property of the scheme, not of the split).
inline WorkDecomposition build_evolved_work_distribution(
    const Operator& rho, const EigenSystem& e0, const EigenSystem& et, const Operator& u,
    const MeasurementScheme& scheme, const Tolerances& tols = default_tolerances()) {
    detail::validate_triple(rho, e0, et, u, scheme, tols);
    const int d = rho.dim();
    const Eigen::MatrixXcd umat = et.vectors.adjoint() * u.mat() * e0.vectors;
    const Eigen::MatrixXcd rho_t = u.mat() * rho.mat() * u.mat().adjoint();
    const Eigen::MatrixXcd rho_t_eig = et.vectors.adjoint() * rho_t * et.vectors;
    const bool gaussian = scheme.kind == SchemeKind::Gaussian;
    const double width = gaussian ? std::sqrt(2.0) * scheme.sigma : 0.0;

    double scale = 1.0;
    for (double v : e0.values) scale = std::max(scale, std::abs(v));
    for (double v : et.values) scale = std::max(scale, std::abs(v));
    const double merge_tol = tols.delta_merge * scale;

    WorkDecomposition out;
    out.scheme = scheme;
    out.rho_split_basis = rho_t_eig;
    out.pair_factors = detail::gaussian_pair_factors(e0, scheme);

    // A(a,b) = <eps^t_a| U M^W U^dag |eps^t_b> as a component list.
    auto conjugated_element = [&](int a, int b) {
        std::vector<MixtureComponent> comps;
        for (int n = 0; n < d; ++n) {
            for (int np = 0; np < d; ++np) {
                const double kappa = out.pair_factors(n, np);
                if (kappa == 0.0) continue;
                const double emid = 0.5 * (e0.values[n] + e0.values[np]);
                const cxd outer = umat(a, n) * std::conj(umat(b, np)) * kappa;
                if (std::abs(outer) == 0.0) continue;
                for (int m = 0; m < d; ++m) {
                    const cxd w = outer * std::conj(umat(m, n)) * umat(m, np);
                    comps.push_back({w, et.values[m] - emid, width});
                }
            }
        }
        detail::merge_components(comps, merge_tol);
        return comps;
    };

    out.per_level.resize(d);
    for (int i = 0; i < d; ++i) {
        out.per_level[i].label = MixtureLabel::PerLevel;
        out.per_level[i].level = i;
        out.per_level[i].components = conjugated_element(i, i);
        for (auto& c : out.per_level[i].components) c.weight = cxd(c.weight.real(), 0.0);
    }

    out.incoherent.label = MixtureLabel::Incoherent;
    for (int i = 0; i < d; ++i) {
        const double pop = rho_t_eig(i, i).real();
        if (pop == 0.0) continue;
        for (const auto& c : out.per_level[i].components)
            out.incoherent.components.push_back({pop * c.weight, c.mean, c.width});
    }
    detail::merge_components(out.incoherent.components, merge_tol);

    out.coherent.label = MixtureLabel::Coherent;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            const cxd rho_ij = rho_t_eig(i, j);
            if (std::abs(rho_ij) == 0.0) continue;
            for (const auto& c : conjugated_element(j, i))
                out.coherent.components.push_back({rho_ij * c.weight, c.mean, c.width});
        }
    }
    detail::merge_components(out.coherent.components, merge_tol);

    out.full.label = MixtureLabel::Full;
    out.full.components = out.incoherent.components;
    out.full.components.insert(out.full.components.end(), out.coherent.components.begin(),
                               out.coherent.components.end());
    detail::merge_components(out.full.components, merge_tol);

    out.survived_coherence_factor =
        gaussian ? detail::coherence_weighted_factor(rho_t_eig, out.pair_factors) : 0.0;
    return out;
}

}  // namespace qwork
