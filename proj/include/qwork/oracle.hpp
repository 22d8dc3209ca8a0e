#pragma once

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>
#include <vector>

#include "qwork/model.hpp"
#include "qwork/qcore.hpp"

namespace qwork::oracle {

//============================================================================
// Independent ground truth: direct 2D quadrature of the joint probability
// P(E^t, E^0) = Tr[M_{E^t} U M_{E^0} rho M_{E^0}^dag U^dag M_{E^t}^dag],
// assembled from the Gaussian measurement operators numerically. No mixture
// algebra from the analytic path enters here.
//============================================================================

/// M_E = sum_n (2 pi sigma^2)^{-1/4} exp(-(eps_n - E)^2 / (4 sigma^2)) |n><n|.
inline Operator gaussian_measurement_operator(const EigenSystem& eig, double energy,
                                              double sigma) {
    const int d = eig.dim();
    const double norm = std::pow(2.0 * pi * sigma * sigma, -0.25);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        const double de = eig.values[n] - energy;
        const double amp = norm * std::exp(-de * de / (4.0 * sigma * sigma));
        m += amp * (eig.vectors.col(n) * eig.vectors.col(n).adjoint());
    }
    return Operator(std::move(m));
}

inline double joint_probability(const Operator& rho, const EigenSystem& e0, const EigenSystem& et,
                                const Operator& u, double sigma, double energy0, double energy_t) {
    if (sigma <= 0.0) throw contract_violation("joint_probability: sigma must be > 0");
    const Operator m0 = gaussian_measurement_operator(e0, energy0, sigma);
    const Operator mt = gaussian_measurement_operator(et, energy_t, sigma);
    const Eigen::MatrixXcd a = mt.mat() * u.mat() * m0.mat();
    return (a * rho.mat() * a.adjoint()).trace().real();
}

struct QuadratureGrid {
    double e0_lo = 0.0, e0_hi = 0.0;
    double et_lo = 0.0, et_hi = 0.0;
    int n0 = 400, nt = 400;  // even, >= 200
};

inline QuadratureGrid make_grid(const EigenSystem& e0, const EigenSystem& et, double sigma,
                                int n0 = 400, int nt = 400) {
    QuadratureGrid g;
    g.e0_lo = e0.values.front() - 10.0 * sigma;
    g.e0_hi = e0.values.back() + 10.0 * sigma;
    g.et_lo = et.values.front() - 10.0 * sigma;
    g.et_hi = et.values.back() + 10.0 * sigma;
    g.n0 = n0;
    g.nt = nt;
    if (n0 < 200 || nt < 200 || n0 % 2 || nt % 2)
        throw contract_violation("QuadratureGrid: point counts must be even and >= 200");
    return g;
}

namespace detail {

template <typename F>
double composite_simpson(const F& f, double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double acc = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace detail

/// P(W = w) by composite Simpson along the line E^t = E^0 + w, with the
/// resolution doubled until the estimate moves by less than 1e-8.
inline double marginal_work_density(const Operator& rho, const EigenSystem& e0,
                                    const EigenSystem& et, const Operator& u, double sigma,
                                    const QuadratureGrid& grid, double w) {
    const auto f = [&](double energy0) {
        return joint_probability(rho, e0, et, u, sigma, energy0, energy0 + w);
    };
    int n = grid.n0;
    double prev = detail::composite_simpson(f, grid.e0_lo, grid.e0_hi, n);
    const int cap = 1 << 21;
    while (true) {
        n *= 2;
        if (n > cap) {
            std::ostringstream os;
            os << "marginal_work_density: no convergence at " << cap << " points";
            throw convergence_error(os.str(), prev);
        }
        const double cur = detail::composite_simpson(f, grid.e0_lo, grid.e0_hi, n);
        if (std::abs(cur - prev) < 1e-8) return cur;
        prev = cur;
    }
}

/// Total probability integral over both measurement outcomes (Simpson in 2D).
inline double total_probability(const Operator& rho, const EigenSystem& e0, const EigenSystem& et,
                                const Operator& u, double sigma, const QuadratureGrid& grid) {
    const auto row = [&](double energy_t) {
        const auto f = [&](double energy0) {
            return joint_probability(rho, e0, et, u, sigma, energy0, energy_t);
        };
        return detail::composite_simpson(f, grid.e0_lo, grid.e0_hi, grid.n0);
    };
    return detail::composite_simpson(row, grid.et_lo, grid.et_hi, grid.nt);
}

//============================================================================
// ODE propagator oracle: integrate i dU/dtau = H(tau) U with an adaptive
// high-order Runge-Kutta scheme, independent of the midpoint product
//============================================================================

inline Operator evolve_ode(const HamiltonianSchedule& sched, double t, double abs_tol = 1e-13,
                           double rel_tol = 1e-13) {
    namespace odeint = boost::numeric::odeint;
    using state_type = std::vector<double>;  // interleaved re/im, row-major

    const int d = sched.dim;
    const auto system = [&](const state_type& y, state_type& dydt, double tau) {
        Eigen::MatrixXcd u(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const std::size_t k = 2 * (static_cast<std::size_t>(i) * d + j);
                u(i, j) = cxd(y[k], y[k + 1]);
            }
        const Eigen::MatrixXcd du = cxd(0.0, -1.0) * (sched.at(tau).mat() * u);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const std::size_t k = 2 * (static_cast<std::size_t>(i) * d + j);
                dydt[k] = du(i, j).real();
                dydt[k + 1] = du(i, j).imag();
            }
    };

    state_type y(2 * static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) y[2 * (static_cast<std::size_t>(i) * d + i)] = 1.0;

    auto stepper =
        odeint::make_controlled<odeint::runge_kutta_fehlberg78<state_type>>(abs_tol, rel_tol);
    odeint::integrate_adaptive(stepper, system, y, 0.0, t, std::min(1e-2, t > 0 ? t : 1e-2));

    Eigen::MatrixXcd u(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const std::size_t k = 2 * (static_cast<std::size_t>(i) * d + j);
            u(i, j) = cxd(y[k], y[k + 1]);
        }
    return Operator(std::move(u));
}

}  // namespace qwork::oracle
