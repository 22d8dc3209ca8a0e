// Minimal library walk-through: build the work distribution of a driven
// two-level system once, then print how predictability and coherence
// effectiveness trade off as the measurement error grows.

#include <cstdio>

#include "qwork/duality.hpp"

int main() {
    using namespace qwork;

    const DrivenTwoLevel sched(0.01, 0.01);   // omega0, omega (units of g)
    const double t = 100.0;
    const double theta = pi / 8.0;            // |psi> = sin(theta)|2> + cos(theta)|1>

    const auto e0 = transient_eigensystem(sched, 0.0);
    const auto et = transient_eigensystem(sched, t);
    const auto u = evolve(make_schedule(sched, t), t, 1e-10).unitary;
    const auto rho = two_level_pure_state(theta);

    std::printf("%-10s %-12s %-12s %-12s\n", "sigma", "D_W", "V_W", "D^2+V^2");
    for (double sigma : {0.005, 0.02, 0.08, 0.3, 1.0, 4.0, 16.0}) {
        const auto decomp =
            build_work_distribution(rho, e0, et, u, MeasurementScheme::gaussian(sigma));
        const auto rep = duality_report(decomp, 1e-9);
        std::printf("%-10g %-12.8f %-12.8f %-12.8f\n", sigma, rep.d_w, rep.v_w,
                    rep.d_w * rep.d_w + rep.v_w * rep.v_w);
    }

    const auto proj = build_work_distribution(rho, e0, et, u, MeasurementScheme::projective());
    const auto rep = duality_report(proj, 1e-9);
    std::printf("projective D_W=%.8f V_W=%.8f\n", rep.d_w, rep.v_w);
    return 0;
}
