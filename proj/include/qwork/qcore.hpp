#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "qwork/common.hpp"

namespace qwork {

//============================================================================
// Operator: dense complex matrix for small fixed dimension
//============================================================================

class Operator {
  public:
    Operator() = default;
    explicit Operator(Eigen::MatrixXcd m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols())
            throw contract_violation("Operator: matrix must be square");
    }

    static Operator identity(int d) { return Operator(Eigen::MatrixXcd::Identity(d, d)); }
    static Operator zero(int d) { return Operator(Eigen::MatrixXcd::Zero(d, d)); }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXcd& mat() const { return m_; }
    Eigen::MatrixXcd& mat() { return m_; }
    cxd operator()(int i, int j) const { return m_(i, j); }

    Operator adjoint() const { return Operator(m_.adjoint()); }
    cxd trace() const { return m_.trace(); }

    bool is_hermitian(double tol) const { return (m_ - m_.adjoint()).norm() <= tol; }

    bool is_unitary(double tol) const {
        const int d = dim();
        return (m_.adjoint() * m_ - Eigen::MatrixXcd::Identity(d, d)).norm() <= tol;
    }

    // Hermitian, unit trace, eigenvalues >= -tol.
    bool is_density(double tol) const {
        if (!is_hermitian(tol)) return false;
        if (std::abs(m_.trace() - cxd(1.0, 0.0)) > tol) return false;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff() >= -tol;
    }

    friend Operator operator*(const Operator& a, const Operator& b) {
        return Operator(a.m_ * b.m_);
    }
    friend Operator operator+(const Operator& a, const Operator& b) {
        return Operator(a.m_ + b.m_);
    }
    friend Operator operator-(const Operator& a, const Operator& b) {
        return Operator(a.m_ - b.m_);
    }
    friend Operator operator*(cxd s, const Operator& a) { return Operator(s * a.m_); }
    friend Operator operator*(double s, const Operator& a) { return Operator(s * a.m_); }

  private:
    Eigen::MatrixXcd m_;
};

inline double frobenius_norm(const Operator& a) { return a.mat().norm(); }

inline double frobenius_distance(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) {
        std::ostringstream os;
        os << "frobenius_distance: dimension mismatch " << a.dim() << " vs " << b.dim();
        throw contract_violation(os.str());
    }
    return (a.mat() - b.mat()).norm();
}

//============================================================================
// EigenSystem: ascending eigenvalues + orthonormal eigenvectors with a
// deterministic phase convention
//============================================================================

struct EigenSystem {
    std::vector<double> values;   // ascending
    Eigen::MatrixXcd vectors;     // column i pairs with values[i]

    int dim() const { return static_cast<int>(values.size()); }
    Eigen::VectorXcd vector(int i) const { return vectors.col(i); }

    Operator reconstruct() const {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim(), dim());
        for (int i = 0; i < dim(); ++i)
            m += values[i] * (vectors.col(i) * vectors.col(i).adjoint());
        return Operator(std::move(m));
    }
};

namespace detail {

// Rotate a column's global phase so its largest-modulus entry (first such
// entry on ties) is real and positive.
inline void fix_column_phase(Eigen::MatrixXcd& vecs, int col) {
    int imax = 0;
    double best = 0.0;
    for (int i = 0; i < vecs.rows(); ++i) {
        const double a = std::abs(vecs(i, col));
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    if (best == 0.0) return;
    const cxd pivot = vecs(imax, col);
    vecs.col(col) *= std::conj(pivot) / std::abs(pivot);
    vecs(imax, col) = cxd(std::abs(vecs(imax, col)), 0.0);  // scrub rounding in Im
}

inline bool column_lex_less(const Eigen::MatrixXcd& vecs, int a, int b) {
    for (int i = 0; i < vecs.rows(); ++i) {
        const cxd x = vecs(i, a), y = vecs(i, b);
        if (x.real() != y.real()) return x.real() < y.real();
        if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
    return false;
}

}  // namespace detail

/// Eigendecomposition of a Hermitian operator. Eigenvalues ascending,
/// vectors orthonormal, phases fixed by the largest-modulus-entry convention,
/// degenerate blocks ordered lexicographically. Deterministic for identical
/// input.
inline EigenSystem hermitian_eigensystem(const Operator& op,
                                         const Tolerances& tols = default_tolerances()) {
    const double asym = (op.mat() - op.mat().adjoint()).norm();
    if (asym > tols.hermiticity) {
        std::ostringstream os;
        os << "hermitian_eigensystem: input not Hermitian, ||A - A^dag||_F = " << asym;
        throw contract_violation(os.str());
    }
    // Symmetrize first so the solver sees an exactly Hermitian matrix.
    Eigen::MatrixXcd h = 0.5 * (op.mat() + op.mat().adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success)
        throw convergence_error("hermitian_eigensystem: solver failed", asym);

    EigenSystem sys;
    const int d = op.dim();
    sys.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + d);
    sys.vectors = es.eigenvectors();
    for (int i = 0; i < d; ++i) detail::fix_column_phase(sys.vectors, i);

    // Deterministic order inside (nearly) degenerate blocks.
    const double scale = std::max(1.0, std::abs(sys.values.front()) + std::abs(sys.values.back()));
    for (int lo = 0; lo < d;) {
        int hi = lo + 1;
        while (hi < d && sys.values[hi] - sys.values[lo] <= tols.degeneracy * scale) ++hi;
        if (hi - lo > 1) {
            std::vector<int> order(hi - lo);
            for (int k = 0; k < hi - lo; ++k) order[k] = lo + k;
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return detail::column_lex_less(sys.vectors, a, b);
            });
            Eigen::MatrixXcd block(d, hi - lo);
            std::vector<double> vals(hi - lo);
            for (int k = 0; k < hi - lo; ++k) {
                block.col(k) = sys.vectors.col(order[k]);
                vals[k] = sys.values[order[k]];
            }
            for (int k = 0; k < hi - lo; ++k) {
                sys.vectors.col(lo + k) = block.col(k);
                sys.values[lo + k] = vals[k];
            }
        }
        lo = hi;
    }
    return sys;
}

//============================================================================
// Matrix exponential of -i * H * dt for Hermitian H
//============================================================================

namespace detail {

// Closed form for d = 2: H = c0*I + a.sigma, exp(-iHt) from cos/sin of |a|t.
inline Operator expm_rodrigues2(const Eigen::MatrixXcd& h, double dt) {
    const cxd c0 = 0.5 * (h(0, 0) + h(1, 1));
    const double az = 0.5 * (h(0, 0) - h(1, 1)).real();
    const double ax = h(0, 1).real();
    const double ay = -h(0, 1).imag();  // h01 = ax - i ay
    const double a = std::sqrt(ax * ax + ay * ay + az * az);
    Eigen::Matrix2cd u;
    const cxd phase = std::exp(cxd(0.0, -c0.real() * dt));
    if (a == 0.0) {
        u = phase * Eigen::Matrix2cd::Identity();
    } else {
        const double c = std::cos(a * dt), s = std::sin(a * dt);
        const cxd i(0.0, 1.0);
        u(0, 0) = phase * (c - i * s * az / a);
        u(0, 1) = phase * (-i * s * (ax - i * ay) / a);
        u(1, 0) = phase * (-i * s * (ax + i * ay) / a);
        u(1, 1) = phase * (c + i * s * az / a);
    }
    return Operator(Eigen::MatrixXcd(u));
}

inline Operator expm_via_eigen(const Operator& op, double dt, const Tolerances& tols) {
    EigenSystem sys = hermitian_eigensystem(op, tols);
    const int d = op.dim();
    Eigen::VectorXcd phases(d);
    for (int i = 0; i < d; ++i) phases(i) = std::exp(cxd(0.0, -sys.values[i] * dt));
    return Operator(sys.vectors * phases.asDiagonal() * sys.vectors.adjoint());
}

}  // namespace detail

/// exp(-i * op * dt) for Hermitian op. Uses the closed 2x2 form when d = 2
/// and the eigendecomposition route otherwise; the two agree to 1e-12.
inline Operator expm_hermitian_times_minus_i(const Operator& op, double dt,
                                             const Tolerances& tols = default_tolerances()) {
    const double asym = (op.mat() - op.mat().adjoint()).norm();
    if (asym > tols.hermiticity) {
        std::ostringstream os;
        os << "expm_hermitian_times_minus_i: input not Hermitian, ||A - A^dag||_F = " << asym;
        throw contract_violation(os.str());
    }
    if (op.dim() == 2) return detail::expm_rodrigues2(op.mat(), dt);
    return detail::expm_via_eigen(op, dt, tols);
}

}  // namespace qwork
