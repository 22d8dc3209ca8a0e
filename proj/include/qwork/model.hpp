#pragma once

#include <cmath>
#include <functional>

#include "qwork/qcore.hpp"

namespace qwork {

//============================================================================
// Driven two-level system  H(tau) = omega0*sigma_z + g*sin(omega*tau)*sigma_x
// in the fixed basis (|1>, |2>), sigma_z = diag(-1, +1), g = 1.
//============================================================================

struct DrivenTwoLevel {
    double omega0 = 0.01;  // level splitting, units of g
    double omega = 0.01;   // drive frequency
    static constexpr double g = 1.0;

    DrivenTwoLevel() = default;
    DrivenTwoLevel(double omega0_, double omega_) : omega0(omega0_), omega(omega_) {
        if (omega0 < 0.0) throw contract_violation("DrivenTwoLevel: omega0 must be >= 0");
        if (omega <= 0.0) throw contract_violation("DrivenTwoLevel: omega must be > 0");
    }
};

inline Operator hamiltonian_at(const DrivenTwoLevel& sched, double tau) {
    const double s = DrivenTwoLevel::g * std::sin(sched.omega * tau);
    Eigen::Matrix2cd h;
    h << -sched.omega0, s, s, sched.omega0;
    return Operator(Eigen::MatrixXcd(h));
}

/// Closed-form instantaneous eigensystem: values -/+ sqrt(omega0^2 + sin^2(omega*tau)),
/// vectors mapped onto the library phase convention. The fully degenerate
/// point (omega0 = 0, sin(omega*tau) = 0) returns the canonical basis.
inline EigenSystem transient_eigensystem(const DrivenTwoLevel& sched, double tau) {
    const double w0 = sched.omega0;
    const double s = DrivenTwoLevel::g * std::sin(sched.omega * tau);
    const double eps = std::sqrt(w0 * w0 + s * s);

    EigenSystem sys;
    sys.values = {-eps, eps};
    sys.vectors = Eigen::MatrixXcd(2, 2);
    if (eps == 0.0) {
        sys.vectors.setIdentity();
        return sys;
    }
    const double n = std::hypot(w0 + eps, s);
    // ground: [(omega0 + eps)|1> - s|2>]/n, excited: [s|1> + (omega0 + eps)|2>]/n
    sys.vectors(0, 0) = (w0 + eps) / n;
    sys.vectors(1, 0) = -s / n;
    sys.vectors(0, 1) = s / n;
    sys.vectors(1, 1) = (w0 + eps) / n;
    for (int i = 0; i < 2; ++i) detail::fix_column_phase(sys.vectors, i);
    return sys;
}

//============================================================================
// Generic schedule: an arbitrary Hermitian evaluator over [0, t_final]
//============================================================================

struct HamiltonianSchedule {
    int dim = 2;
    std::function<Operator(double)> at;
    double t_final = 0.0;
};

inline HamiltonianSchedule make_schedule(const DrivenTwoLevel& sched, double t_final) {
    return HamiltonianSchedule{2, [sched](double tau) { return hamiltonian_at(sched, tau); },
                               t_final};
}

inline HamiltonianSchedule shift_schedule(const HamiltonianSchedule& sched, double offset) {
    auto at = sched.at;
    return HamiltonianSchedule{sched.dim, [at, offset](double tau) { return at(tau + offset); },
                               sched.t_final - offset};
}

}  // namespace qwork
