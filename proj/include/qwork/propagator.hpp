#pragma once

#include <sstream>

#include "qwork/model.hpp"

namespace qwork {

struct PropagatorResult {
    Operator unitary;
    long steps_used = 0;
    double unitarity_residual = 0.0;
    double richardson_error_estimate = 0.0;
};

namespace detail {

inline Operator midpoint_product(const HamiltonianSchedule& sched, double t, long n) {
    Operator u = Operator::identity(sched.dim);
    const double h = t / static_cast<double>(n);
    for (long k = 0; k < n; ++k) {
        const double tau = (static_cast<double>(k) + 0.5) * h;
        u = expm_hermitian_times_minus_i(sched.at(tau), h) * u;  // later factors on the left
    }
    return u;
}

}  // namespace detail

/// Time-ordered propagator over [0, t] by the midpoint exponential product,
/// with the step count doubled until two successive refinements differ by
/// less than tol in Frobenius norm.
inline PropagatorResult evolve(const HamiltonianSchedule& sched, double t, double tol,
                               long step_cap = 1L << 24, long initial_steps = 64) {
    if (t < 0.0) throw contract_violation("evolve: t must be >= 0");
    if (tol <= 0.0) throw contract_violation("evolve: tol must be > 0");

    PropagatorResult res;
    if (t == 0.0) {
        res.unitary = Operator::identity(sched.dim);
        return res;
    }

    long n = initial_steps;
    Operator prev = detail::midpoint_product(sched, t, n);
    double diff = 0.0;
    while (true) {
        n *= 2;
        if (n > step_cap) {
            std::ostringstream os;
            os << "evolve: no convergence within " << step_cap
               << " steps, last refinement delta " << diff;
            throw convergence_error(os.str(), diff);
        }
        Operator cur = detail::midpoint_product(sched, t, n);
        diff = frobenius_distance(cur, prev);
        if (diff < tol) {
            res.unitary = std::move(cur);
            res.steps_used = n;
            // second-order rule: error of the finer result ~ delta/3
            res.richardson_error_estimate = diff / 3.0;
            break;
        }
        prev = std::move(cur);
    }

    res.unitarity_residual =
        (res.unitary.mat().adjoint() * res.unitary.mat() -
         Eigen::MatrixXcd::Identity(sched.dim, sched.dim))
            .norm();
    if (res.unitarity_residual >= 1e-9) {
        std::ostringstream os;
        os << "evolve: accepted propagator lost unitarity, ||U^dag U - I||_F = "
           << res.unitarity_residual;
        throw convergence_error(os.str(), res.unitarity_residual);
    }
    return res;
}

}  // namespace qwork
