#include <catch2/catch_amalgamated.hpp>

#include "qwork/qcore.hpp"
#include "test_helpers.hpp"

using namespace qwork;
using Catch::Matchers::ContainsSubstring;

namespace {

Operator pauli_z() {
    Eigen::Matrix2cd m;
    m << -1.0, 0.0, 0.0, 1.0;
    return Operator(Eigen::MatrixXcd(m));
}

Operator pauli_x() {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0, 1.0, 0.0;
    return Operator(Eigen::MatrixXcd(m));
}

}  // namespace

TEST_CASE("hermitian_eigensystem: Pauli matrices", "[qcore]") {
    SECTION("sigma_z is already diagonal") {
        const auto sys = hermitian_eigensystem(pauli_z());
        REQUIRE(sys.values[0] == Catch::Approx(-1.0).margin(1e-14));
        REQUIRE(sys.values[1] == Catch::Approx(1.0).margin(1e-14));
        REQUIRE(std::abs(sys.vectors(0, 0) - cxd(1.0, 0.0)) < 1e-14);
        REQUIRE(std::abs(sys.vectors(1, 1) - cxd(1.0, 0.0)) < 1e-14);
    }
    SECTION("sigma_x eigenbasis with the fixed phase convention") {
        const auto sys = hermitian_eigensystem(pauli_x());
        const double r = 1.0 / std::sqrt(2.0);
        REQUIRE(sys.values[0] == Catch::Approx(-1.0).margin(1e-14));
        REQUIRE(sys.values[1] == Catch::Approx(1.0).margin(1e-14));
        REQUIRE(std::abs(sys.vectors(0, 0) - cxd(r, 0.0)) < 1e-12);
        REQUIRE(std::abs(sys.vectors(1, 0) - cxd(-r, 0.0)) < 1e-12);
        REQUIRE(std::abs(sys.vectors(0, 1) - cxd(r, 0.0)) < 1e-12);
        REQUIRE(std::abs(sys.vectors(1, 1) - cxd(r, 0.0)) < 1e-12);
    }
}

TEST_CASE("hermitian_eigensystem: driven Hamiltonian vs closed formula", "[qcore]") {
    // H at omega0 = 0.01, omega*tau = 1; eigenvalues -/+ sqrt(omega0^2 + sin^2 1)
    const double w0 = 0.01, s = std::sin(1.0);
    Eigen::Matrix2cd m;
    m << -w0, s, s, w0;
    const auto sys = hermitian_eigensystem(Operator(Eigen::MatrixXcd(m)));
    const double eps = std::sqrt(w0 * w0 + s * s);
    REQUIRE(sys.values[0] == Catch::Approx(-eps).margin(1e-13));
    REQUIRE(sys.values[1] == Catch::Approx(eps).margin(1e-13));
}

TEST_CASE("hermitian_eigensystem: reconstruction and orthonormality", "[qcore]") {
    std::mt19937 rng(42);
    for (int d : {2, 3, 5, 8}) {
        for (int rep = 0; rep < 20; ++rep) {
            const auto op = qwtest::random_hermitian(d, rng);
            const auto sys = hermitian_eigensystem(op);
            REQUIRE(std::is_sorted(sys.values.begin(), sys.values.end()));
            REQUIRE((sys.vectors.adjoint() * sys.vectors -
                     Eigen::MatrixXcd::Identity(d, d))
                        .norm() < 1e-12);
            REQUIRE(frobenius_distance(sys.reconstruct(), op) < 1e-10);
            for (int i = 0; i < d; ++i) {
                int imax = 0;
                for (int r = 1; r < d; ++r)
                    if (std::abs(sys.vectors(r, i)) > std::abs(sys.vectors(imax, i))) imax = r;
                REQUIRE(sys.vectors(imax, i).imag() == 0.0);
                REQUIRE(sys.vectors(imax, i).real() > 0.0);
            }
        }
    }
}

TEST_CASE("hermitian_eigensystem: deterministic output", "[qcore]") {
    std::mt19937 rng(7);
    const auto op = qwtest::random_hermitian(4, rng);
    const auto a = hermitian_eigensystem(op);
    const auto b = hermitian_eigensystem(op);
    REQUIRE(std::memcmp(a.values.data(), b.values.data(), sizeof(double) * 4) == 0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) REQUIRE(a.vectors(i, j) == b.vectors(i, j));
}

TEST_CASE("hermitian_eigensystem: degenerate spectrum", "[qcore]") {
    const auto sys = hermitian_eigensystem(Operator::zero(2));
    REQUIRE(sys.values[0] == 0.0);
    REQUIRE(sys.values[1] == 0.0);
    REQUIRE((sys.vectors.adjoint() * sys.vectors - Eigen::MatrixXcd::Identity(2, 2)).norm() <
            1e-12);
}

TEST_CASE("hermitian_eigensystem: rejects non-Hermitian input", "[qcore]") {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0, 0.0, 0.0;
    REQUIRE_THROWS_MATCHES(hermitian_eigensystem(Operator(Eigen::MatrixXcd(m))),
                           contract_violation, Catch::Matchers::MessageMatches(ContainsSubstring(
                                                   "not Hermitian")));
}

TEST_CASE("expm: trivial cases", "[qcore]") {
    SECTION("zero time gives the identity") {
        const auto u = expm_hermitian_times_minus_i(pauli_z(), 0.0);
        REQUIRE(frobenius_distance(u, Operator::identity(2)) < 1e-15);
    }
    SECTION("exp(-i sigma_x pi) = -I") {
        const auto u = expm_hermitian_times_minus_i(pauli_x(), qwork::pi);
        REQUIRE(frobenius_distance(u, cxd(-1.0, 0.0) * Operator::identity(2)) < 1e-14);
    }
}

TEST_CASE("expm: agrees with scaling-and-squaring oracle", "[qcore]") {
    // fig-1 Hamiltonian at tau = 0.5, dt = 0.01
    const double w0 = 0.01, s = std::sin(0.01 * 0.5);
    Eigen::Matrix2cd m;
    m << -w0, s, s, w0;
    const Operator h{Eigen::MatrixXcd(m)};
    const auto u = expm_hermitian_times_minus_i(h, 0.01);
    const Eigen::MatrixXcd ref = qwtest::expm_taylor(cxd(0.0, -0.01) * h.mat());
    REQUIRE((u.mat() - ref).norm() < 1e-14);
    REQUIRE(u.is_unitary(1e-12));
}

TEST_CASE("expm: Rodrigues and eigendecomposition routes agree", "[qcore]") {
    std::mt19937 rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const auto h = qwtest::random_hermitian(2, rng);
        const double dt = 0.1 + 0.05 * rep;
        const auto a = detail::expm_rodrigues2(h.mat(), dt);
        const auto b = detail::expm_via_eigen(h, dt, default_tolerances());
        REQUIRE(frobenius_distance(a, b) < 1e-12);
    }
    for (int d : {3, 4}) {
        const auto h = qwtest::random_hermitian(d, rng);
        const auto u = expm_hermitian_times_minus_i(h, 0.3);
        const Eigen::MatrixXcd ref = qwtest::expm_taylor(cxd(0.0, -0.3) * h.mat());
        REQUIRE((u.mat() - ref).norm() < 1e-12);
    }
}

TEST_CASE("expm: inverse pairing stays unitary", "[qcore]") {
    std::mt19937 rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        const auto h = qwtest::random_hermitian(2 + rep % 3, rng);
        const auto fwd = expm_hermitian_times_minus_i(h, 0.7);
        const auto bwd = expm_hermitian_times_minus_i(h, -0.7);
        REQUIRE(frobenius_distance(fwd * bwd, Operator::identity(h.dim())) < 1e-12);
    }
}

TEST_CASE("expm: rejects non-Hermitian input", "[qcore]") {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0, 0.5, 0.0;
    REQUIRE_THROWS_AS(expm_hermitian_times_minus_i(Operator(Eigen::MatrixXcd(m)), 0.1),
                      contract_violation);
}

TEST_CASE("frobenius_distance", "[qcore]") {
    REQUIRE(frobenius_distance(Operator::identity(2), Operator::identity(2)) == 0.0);
    REQUIRE(frobenius_distance(pauli_z(), cxd(-1.0, 0.0) * pauli_z()) ==
            Catch::Approx(2.0 * std::sqrt(2.0)));
    REQUIRE_THROWS_AS(frobenius_distance(Operator::identity(2), Operator::identity(3)),
                      contract_violation);
}

TEST_CASE("Operator predicates", "[qcore]") {
    std::mt19937 rng(3);
    REQUIRE(pauli_x().is_hermitian(1e-12));
    REQUIRE(qwtest::random_unitary(3, rng).is_unitary(1e-12));
    REQUIRE(qwtest::random_density(3, rng).is_density(1e-10));
    REQUIRE_FALSE(pauli_x().is_density(1e-10));
}
