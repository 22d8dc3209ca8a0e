#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "qwork/common.hpp"

namespace qwork {

//============================================================================
// Measurement schemes
//============================================================================

enum class SchemeKind { Projective, Gaussian };

struct MeasurementScheme {
    SchemeKind kind = SchemeKind::Projective;
    double sigma = 0.0;  // measurement error, Gaussian only

    static MeasurementScheme projective() { return {SchemeKind::Projective, 0.0}; }
    static MeasurementScheme gaussian(double sigma) {
        if (sigma <= 0.0)
            throw contract_violation("MeasurementScheme: Gaussian scheme needs sigma > 0");
        return {SchemeKind::Gaussian, sigma};
    }
};

//============================================================================
// Work distributions as signed/complex mixtures of Gaussians and deltas
//============================================================================

struct MixtureComponent {
    cxd weight{0.0, 0.0};
    double mean = 0.0;
    double width = 0.0;  // standard deviation; 0 encodes a Dirac delta
};

enum class MixtureLabel { Full, Incoherent, Coherent, PerLevel };

inline const char* to_string(MixtureLabel label) {
    switch (label) {
        case MixtureLabel::Full: return "full";
        case MixtureLabel::Incoherent: return "incoherent";
        case MixtureLabel::Coherent: return "coherent";
        case MixtureLabel::PerLevel: return "per_level";
    }
    return "?";
}

struct MixtureDistribution {
    std::vector<MixtureComponent> components;
    MixtureLabel label = MixtureLabel::Full;
    int level = -1;  // set for PerLevel

    bool has_delta() const {
        return std::any_of(components.begin(), components.end(),
                           [](const MixtureComponent& c) { return c.width == 0.0; });
    }
};

inline cxd total_weight(const MixtureDistribution& dist) {
    cxd w{0.0, 0.0};
    for (const auto& c : dist.components) w += c.weight;
    return w;
}

namespace detail {

inline double gauss_pdf(double x, double mean, double width) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    const double z = (x - mean) / width;
    return inv_sqrt_2pi / width * std::exp(-0.5 * z * z);
}

inline double gauss_cdf(double x, double mean, double width) {
    return 0.5 * std::erfc(-(x - mean) / (width * 1.4142135623730950488));
}

// Real density of the Gaussian components only; deltas must be excluded by
// the caller.
inline double density_re(const std::vector<MixtureComponent>& comps, double x) {
    double acc = 0.0;
    for (const auto& c : comps) acc += c.weight.real() * gauss_pdf(x, c.mean, c.width);
    return acc;
}

struct SimpsonPanel {
    double value;
};

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double m, double b, double fa, double fm,
                            double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol, int depth = 48) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, depth);
}

// Point masses grouped by location so that coincident deltas cancel before
// the absolute value is taken.
inline double abs_delta_mass(std::vector<MixtureComponent> deltas, double merge_tol) {
    if (deltas.empty()) return 0.0;
    std::sort(deltas.begin(), deltas.end(),
              [](const MixtureComponent& a, const MixtureComponent& b) { return a.mean < b.mean; });
    double acc = 0.0;
    cxd group = deltas.front().weight;
    double anchor = deltas.front().mean;
    for (std::size_t i = 1; i < deltas.size(); ++i) {
        if (deltas[i].mean - anchor <= merge_tol) {
            group += deltas[i].weight;
        } else {
            acc += std::abs(group);
            group = deltas[i].weight;
            anchor = deltas[i].mean;
        }
    }
    acc += std::abs(group);
    return acc;
}

}  // namespace detail

/// Pointwise density sum_j Re(w_j) N(w | mean_j, width_j). Dirac components
/// are only meaningful under integrals; a positive evaluation bandwidth
/// replaces their width for plotting-style use.
inline double evaluate(const MixtureDistribution& dist, double w, double bandwidth = 0.0) {
    cxd acc{0.0, 0.0};
    for (const auto& c : dist.components) {
        double width = c.width;
        if (width == 0.0) {
            if (bandwidth <= 0.0)
                throw contract_violation(
                    "evaluate: mixture has delta components; supply an evaluation bandwidth");
            width = bandwidth;
        }
        acc += c.weight * detail::gauss_pdf(w, c.mean, width);
    }
    if (std::abs(acc.imag()) >= 1e-12 * std::max(1.0, std::abs(acc.real()))) {
        std::ostringstream os;
        os << "evaluate: density has imaginary residual " << acc.imag() << " at w = " << w;
        throw contract_violation(os.str());
    }
    return acc.real();
}

/// Cumulative distribution; deltas count fully once w >= mean.
inline double cumulative(const MixtureDistribution& dist, double w) {
    cxd acc{0.0, 0.0};
    for (const auto& c : dist.components) {
        if (c.width == 0.0)
            acc += (w >= c.mean) ? c.weight : cxd{0.0, 0.0};
        else
            acc += c.weight * detail::gauss_cdf(w, c.mean, c.width);
    }
    return acc.real();
}

/// Integral of |density| over the support window (all means +/- 10 max
/// width). Deltas contribute |grouped weight| exactly; the Gaussian part is
/// integrated by adaptive Simpson anchored at every component mean.
inline double integrate_abs(const MixtureDistribution& dist, double tol,
                            const Tolerances& tols = default_tolerances()) {
    if (tol <= 0.0) throw contract_violation("integrate_abs: tol must be > 0");
    if (dist.components.empty()) return 0.0;

    std::vector<MixtureComponent> deltas, smooth;
    for (const auto& c : dist.components)
        (c.width == 0.0 ? deltas : smooth).push_back(c);

    double scale = 1.0;
    for (const auto& c : dist.components) scale = std::max(scale, std::abs(c.mean));
    double acc = detail::abs_delta_mass(std::move(deltas), tols.delta_merge * scale);
    if (smooth.empty()) return acc;

    double wmax = 0.0, lo = 0.0, hi = 0.0;
    for (const auto& c : smooth) wmax = std::max(wmax, c.width);
    lo = smooth.front().mean;
    hi = smooth.front().mean;
    for (const auto& c : dist.components) {
        lo = std::min(lo, c.mean);
        hi = std::max(hi, c.mean);
    }
    lo -= 10.0 * wmax;
    hi += 10.0 * wmax;

    // Breakpoints bracket every Gaussian so narrow components cannot hide
    // between quadrature nodes.
    std::vector<double> cuts{lo, hi};
    for (const auto& c : smooth) {
        for (double k : {-10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0}) {
            const double x = c.mean + k * c.width;
            if (x > lo && x < hi) cuts.push_back(x);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const auto f = [&smooth](double x) { return std::abs(detail::density_re(smooth, x)); };
    const double cell_tol = tol / static_cast<double>(cuts.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        acc += detail::adaptive_simpson(f, cuts[i], cuts[i + 1], cell_tol);
    return acc;
}

/// 1/2 * integral |a(W) - b(W)| dW.
inline double trace_distance(const MixtureDistribution& a, const MixtureDistribution& b,
                             double tol, const Tolerances& tols = default_tolerances()) {
    MixtureDistribution diff;
    diff.label = MixtureLabel::Full;
    diff.components = a.components;
    diff.components.reserve(a.components.size() + b.components.size());
    for (auto c : b.components) {
        c.weight = -c.weight;
        diff.components.push_back(c);
    }
    return 0.5 * integrate_abs(diff, tol, tols);
}

}  // namespace qwork
