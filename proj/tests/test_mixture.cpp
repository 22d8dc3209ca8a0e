#include <catch2/catch_amalgamated.hpp>

#include "qwork/mixture.hpp"

using namespace qwork;

namespace {

MixtureDistribution gaussians(std::initializer_list<MixtureComponent> comps) {
    MixtureDistribution d;
    d.components = comps;
    return d;
}

}  // namespace

TEST_CASE("evaluate: pointwise density", "[mixture]") {
    SECTION("empty mixture") {
        REQUIRE(evaluate(MixtureDistribution{}, 0.3) == 0.0);
    }
    SECTION("standard normal peak") {
        const auto d = gaussians({{cxd(1.0, 0.0), 0.0, 1.0}});
        REQUIRE(evaluate(d, 0.0) == Catch::Approx(1.0 / std::sqrt(2.0 * qwork::pi)));
    }
    SECTION("delta components need a bandwidth") {
        const auto d = gaussians({{cxd(1.0, 0.0), 0.0, 0.0}});
        REQUIRE_THROWS_AS(evaluate(d, 0.0), contract_violation);
        REQUIRE(evaluate(d, 0.0, 0.5) == Catch::Approx(evaluate(gaussians({{cxd(1.0, 0.0), 0.0, 0.5}}), 0.0)));
    }
    SECTION("imaginary residual is rejected") {
        const auto d = gaussians({{cxd(0.0, 1.0), 0.0, 1.0}});
        REQUIRE_THROWS_AS(evaluate(d, 0.0), contract_violation);
    }
}

TEST_CASE("integrate_abs: exact and closed-form cases", "[mixture]") {
    SECTION("normalized nonnegative mixture integrates to 1") {
        const auto d = gaussians({{cxd(0.25, 0.0), -1.0, 0.3},
                                  {cxd(0.5, 0.0), 0.2, 0.05},
                                  {cxd(0.25, 0.0), 2.0, 1.0}});
        REQUIRE(integrate_abs(d, 1e-10) == Catch::Approx(1.0).margin(1e-9));
    }
    SECTION("well separated signed lobes") {
        const auto d = gaussians({{cxd(0.5, 0.0), -5.0, 0.1}, {cxd(-0.5, 0.0), 5.0, 0.1}});
        REQUIRE(integrate_abs(d, 1e-10) == Catch::Approx(1.0).margin(1e-9));
    }
    SECTION("overlapping opposite Gaussians: 2 erf(a / (sqrt(2) s))") {
        // antisymmetric pair, integral of |N(-a) - N(a)| known in closed form
        const double a = 0.7, s = 0.4;
        const auto d = gaussians({{cxd(1.0, 0.0), -a, s}, {cxd(-1.0, 0.0), a, s}});
        REQUIRE(integrate_abs(d, 1e-11) ==
                Catch::Approx(2.0 * std::erf(a / (std::sqrt(2.0) * s))).epsilon(1e-9));
    }
    SECTION("deltas contribute grouped absolute weights") {
        const auto d = gaussians({{cxd(0.5, 0.0), 1.0, 0.0},
                                  {cxd(-0.5, 0.0), 1.0, 0.0},
                                  {cxd(0.25, 0.0), 2.0, 0.0}});
        REQUIRE(integrate_abs(d, 1e-10) == Catch::Approx(0.25));
    }
    SECTION("delta sitting on a Gaussian adds exactly") {
        const auto d = gaussians({{cxd(0.5, 0.0), 0.0, 0.0}, {cxd(0.5, 0.0), 0.0, 0.2}});
        REQUIRE(integrate_abs(d, 1e-10) == Catch::Approx(1.0).margin(1e-9));
    }
    SECTION("needle inside a wide window is not missed") {
        const auto d = gaussians({{cxd(1.0, 0.0), 0.0, 50.0}, {cxd(1.0, 0.0), 3.0, 1e-4}});
        REQUIRE(integrate_abs(d, 1e-9) == Catch::Approx(2.0).margin(1e-7));
    }
    SECTION("tolerance guard") {
        REQUIRE_THROWS_AS(integrate_abs(MixtureDistribution{}, 0.0), contract_violation);
    }
}

TEST_CASE("trace_distance", "[mixture]") {
    const auto a = gaussians({{cxd(1.0, 0.0), 0.0, 0.5}});
    SECTION("identical distributions") {
        REQUIRE(trace_distance(a, a, 1e-10) == Catch::Approx(0.0).margin(1e-10));
    }
    SECTION("two unit deltas at distinct points") {
        const auto x = gaussians({{cxd(1.0, 0.0), -1.0, 0.0}});
        const auto y = gaussians({{cxd(1.0, 0.0), 2.0, 0.0}});
        REQUIRE(trace_distance(x, y, 1e-10) == Catch::Approx(1.0));
    }
    SECTION("half-overlapping deltas") {
        const auto x = gaussians({{cxd(0.5, 0.0), 0.0, 0.0}, {cxd(0.5, 0.0), 1.0, 0.0}});
        const auto y = gaussians({{cxd(0.5, 0.0), 0.0, 0.0}, {cxd(0.5, 0.0), 3.0, 0.0}});
        REQUIRE(trace_distance(x, y, 1e-10) == Catch::Approx(0.5));
    }
}

TEST_CASE("cumulative distribution", "[mixture]") {
    const auto d = gaussians({{cxd(0.5, 0.0), 0.0, 1.0}, {cxd(0.5, 0.0), 2.0, 0.0}});
    const double phi2 = 0.5 * std::erfc(-2.0 / std::sqrt(2.0));
    REQUIRE(cumulative(d, -30.0) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(cumulative(d, 0.0) == Catch::Approx(0.25));
    REQUIRE(cumulative(d, 1.9999) == Catch::Approx(0.5 * phi2).margin(1e-4));
    REQUIRE(cumulative(d, 2.0) == Catch::Approx(0.5 * phi2 + 0.5).margin(1e-4));
    REQUIRE(cumulative(d, 30.0) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("total_weight", "[mixture]") {
    const auto d = gaussians({{cxd(0.5, 0.25), 0.0, 1.0}, {cxd(0.5, -0.25), 2.0, 0.0}});
    REQUIRE(total_weight(d).real() == Catch::Approx(1.0));
    REQUIRE(total_weight(d).imag() == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("MeasurementScheme guards", "[mixture]") {
    REQUIRE_THROWS_AS(MeasurementScheme::gaussian(0.0), contract_violation);
    REQUIRE_THROWS_AS(MeasurementScheme::gaussian(-1.0), contract_violation);
    REQUIRE(MeasurementScheme::projective().kind == SchemeKind::Projective);
}
