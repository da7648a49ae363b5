#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sgfit/eos.hpp"

using namespace sgfit;
using Catch::Approx;

namespace {
// Published cell 25-50 MPa x 300-325 K.
const SgParams kLowCell{1.2424, -1.0229e7, 2.0132e9, 2.6854e4};
// Published cell 275-300 MPa x 600-625 K.
const SgParams kHighCell{1.6777, -2.9442e6, 1.3432e9, 4.394e3};
const SgParams kIdealAir{1.4, 0.0, 0.0, 717.0};
} // namespace

TEST_CASE("pressure reduces to the ideal gas law when q = p_inf = 0") {
    CHECK(pressure(kIdealAir, 1.0, 2.5e5) == Approx(1.0e5).epsilon(1e-14));
}

TEST_CASE("pressure round-trips through internal_energy at a published cell") {
    const double v = 1.0 / 1012.5;
    const double e = internal_energy(kLowCell, 3.0e7, v);
    CHECK(e == Approx(8.431e4).epsilon(0.01)); // coarse magnitude check
    CHECK(pressure(kLowCell, 1012.5, e) == Approx(3.0e7).epsilon(1e-9));
}

TEST_CASE("pressure at e = q is -gamma p_inf") {
    CHECK(pressure(kLowCell, 123.4, kLowCell.q) ==
          Approx(-kLowCell.gamma * kLowCell.p_inf).epsilon(1e-14));
}

TEST_CASE("pressure rejects non-positive or non-finite density") {
    CHECK_THROWS_AS(pressure(kIdealAir, 0.0, 1e5), DomainError);
    CHECK_THROWS_AS(pressure(kIdealAir, -1.0, 1e5), DomainError);
    CHECK_THROWS_AS(pressure(kIdealAir, std::nan(""), 1e5), DomainError);
}

TEST_CASE("temperature reduces to e / c_v for an ideal gas") {
    CHECK(temperature(kIdealAir, 1.0, 2.1510e5) == Approx(300.0).epsilon(1e-12));
}

TEST_CASE("temperature at a published cell state is near 310 K") {
    CHECK(temperature(kLowCell, 1012.5, 8.431e4) == Approx(310.0).epsilon(5e-3));
}

TEST_CASE("temperature is zero when e = q + p_inf / rho") {
    const double rho = 1000.0;
    const double e = kLowCell.q + kLowCell.p_inf / rho;
    CHECK(temperature(kLowCell, rho, e) == Approx(0.0).margin(1e-9));
}

TEST_CASE("internal_energy ideal-gas value") {
    CHECK(internal_energy(kIdealAir, 1.0e5, 1.0) == Approx(2.5e5).epsilon(1e-14));
    CHECK_THROWS_AS(internal_energy(kIdealAir, 1.0e5, 0.0), DomainError);
}

TEST_CASE("pressure(1/v, internal_energy(p, v)) = p for random valid inputs") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> gam(1.05, 3.0), pinf(0.0, 5e9), q(-2e7, 0.0),
        pd(1e5, 5e8), vd(5e-4, 2e-3);
    for (int i = 0; i < 1000; ++i) {
        const SgParams sg{gam(rng), q(rng), pinf(rng), 4000.0};
        const double p = pd(rng), v = vd(rng);
        const double e = internal_energy(sg, p, v);
        // tolerance on the evaluation scale: the gamma p_inf term dominates
        // cancellation when p is small against p_inf
        CHECK(pressure(sg, 1.0 / v, e) ==
              Approx(p).margin(1e-12 * (std::abs(p) + sg.gamma * sg.p_inf)));
    }
}

TEST_CASE("internal_energy at a published high-pressure cell round-trips") {
    const double p = 2.8e8, v = 1.2e-3;
    const double e = internal_energy(kHighCell, p, v);
    CHECK(pressure(kHighCell, 1.0 / v, e) == Approx(p).epsilon(1e-12));
}

TEST_CASE("sound_speed_sq") {
    SgParams ideal = kIdealAir;
    CHECK(sound_speed_sq(ideal, 1.0, 1.0e5) == Approx(1.0e5).epsilon(1e-14));

    const double c2 = sound_speed_sq(kLowCell, 1000.0, 3.0e7);
    CHECK(c2 == Approx(2.0432e6).epsilon(1e-4));
    CHECK(std::sqrt(c2) == Approx(1429.0).epsilon(1e-3));

    // boundary: p just above -p_inf
    const double eps = 1.0;
    CHECK(sound_speed_sq(kLowCell, 2.0, -kLowCell.p_inf + eps) == Approx(eps / 2.0));
    CHECK_THROWS_AS(sound_speed_sq(kLowCell, 1.0, -kLowCell.p_inf), NonPhysicalStateError);
}

TEST_CASE("adiabatic_gamma") {
    CHECK(adiabatic_gamma(kIdealAir, 1.0e5) == Approx(1.4).epsilon(1e-14));
    CHECK(adiabatic_gamma(kLowCell, 3.0e7) == Approx(84.62).epsilon(1e-3));
    CHECK(adiabatic_gamma(kLowCell, 1e15) == Approx(kLowCell.gamma).epsilon(1e-5));
    CHECK_THROWS_AS(adiabatic_gamma(kLowCell, 0.0), DomainError);
}

TEST_CASE("gruneisen and fundamental derivative") {
    CHECK(gruneisen(kIdealAir) == Approx(0.4));
    CHECK(fundamental_derivative(kIdealAir) == Approx(1.2));
    CHECK(gruneisen(kLowCell) == Approx(0.2424));
    CHECK(fundamental_derivative(kLowCell) == Approx(1.1212));
    CHECK(gruneisen(kHighCell) == Approx(0.6777));
    CHECK(fundamental_derivative(kHighCell) == Approx(1.33885));
}

TEST_CASE("Gamma > 0 and G > 1 whenever gamma > 1") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> gam(1.0 + 1e-12, 10.0);
    for (int i = 0; i < 200; ++i) {
        const SgParams sg{gam(rng), 0.0, 0.0, 1.0};
        CHECK(gruneisen(sg) > 0.0);
        CHECK(fundamental_derivative(sg) > 1.0);
    }
}

TEST_CASE("density_from_pT is consistent with the pressure and temperature models") {
    auto check_consistency = [](const SgParams& sg, double p, double T) {
        const double rho = density_from_pT(sg, p, T);
        const double e = internal_energy_from_rhoT(sg, rho, T);
        CHECK(pressure(sg, rho, e) == Approx(p).epsilon(1e-10));
        CHECK(temperature(sg, rho, e) == Approx(T).epsilon(1e-10));
    };
    check_consistency(kIdealAir, 1.0e5, 348.68);
    check_consistency(kLowCell, 3.0e7, 310.0);
    CHECK(density_from_pT(kLowCell, 3.0e7, 310.0) == Approx(1012.5).epsilon(1e-4));
}

TEST_CASE("density_from_pT halves when T doubles at fixed p") {
    const double r1 = density_from_pT(kLowCell, 3.0e7, 310.0);
    const double r2 = density_from_pT(kLowCell, 3.0e7, 620.0);
    CHECK(r1 == Approx(2.0 * r2).epsilon(1e-14));
    CHECK_THROWS_AS(density_from_pT(kLowCell, 3.0e7, 0.0), DomainError);
}

TEST_CASE("all formulas degenerate to their ideal-gas counterparts when q = p_inf = 0") {
    const SgParams sg{1.4, 0.0, 0.0, 717.0};
    const double rho = 1.2, e = 2.0e5, p = (sg.gamma - 1.0) * rho * e;
    CHECK(pressure(sg, rho, e) == Approx(p).epsilon(1e-15));
    CHECK(temperature(sg, rho, e) == Approx(e / sg.c_v).epsilon(1e-15));
    CHECK(sound_speed_sq(sg, rho, p) == Approx((sg.gamma - 1.0) * e).epsilon(1e-14));
    CHECK(adiabatic_gamma(sg, p) == Approx(sg.gamma).epsilon(1e-15));
}

TEST_CASE("SgParams validation") {
    CHECK(kLowCell.valid());
    CHECK_THROWS_AS((SgParams{1.0, 0.0, 0.0, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((SgParams{1.4, 0.0, -1.0, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((SgParams{1.4, 0.0, 0.0, 0.0}.validate()), DomainError);
}
