#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "qwork/qcore.hpp"

namespace qwtest {

using qwork::cxd;

inline Eigen::MatrixXcd random_complex(int d, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = cxd(gauss(rng), gauss(rng));
    return m;
}

inline qwork::Operator random_hermitian(int d, std::mt19937& rng) {
    const Eigen::MatrixXcd g = random_complex(d, rng);
    return qwork::Operator(0.5 * (g + g.adjoint()));
}

inline qwork::Operator random_density(int d, std::mt19937& rng) {
    const Eigen::MatrixXcd g = random_complex(d, rng);
    Eigen::MatrixXcd m = g * g.adjoint();
    m /= m.trace();
    return qwork::Operator(std::move(m));
}

inline qwork::Operator random_unitary(int d, std::mt19937& rng) {
    const Eigen::MatrixXcd g = random_complex(d, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    return qwork::Operator(std::move(q));
}

// Independent matrix exponential oracle: scaling and squaring with a plain
// Taylor series, no eigendecomposition and no closed 2x2 form.
inline Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXcd& a) {
    int squarings = 0;
    double nrm = a.norm();
    while (nrm > 0.25) {
        nrm *= 0.5;
        ++squarings;
    }
    const Eigen::MatrixXcd x = a / std::pow(2.0, squarings);
    const int d = static_cast<int>(a.rows());
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * x / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

}  // namespace qwtest
