#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "sgfit/data_ingest.hpp"
#include "sgfit/fitting.hpp"

using namespace sgfit;
using Catch::Approx;

namespace {

// Published cell 275-300 MPa x 300-325 K.
const SgParams kGenParams{1.4507, -8.2448e6, 2.6430e9, 1.9077e4};

FitWindow synthetic_window(const SgParams& sg, double p_lo, double p_hi, std::size_t np,
                           double T_lo, double T_hi, std::size_t nT, double noise = 0.0,
                           std::uint64_t seed = 0) {
    const Dataset ds =
        synthesize(sg, linspace(p_lo, p_hi, np), linspace(T_lo, T_hi, nT), noise, seed);
    return FitWindow{p_lo, p_hi, T_lo, T_hi, ds.points};
}

// Independent least-squares oracle: 3x3 normal equations solved by Cramer's rule.
std::array<double, 3> normal_equations_cramer(const std::vector<std::array<double, 3>>& a,
                                              const std::vector<double>& b) {
    double m[3][3] = {};
    double r[3] = {};
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int j = 0; j < 3; ++j) {
            r[j] += a[i][j] * b[i];
            for (int k = 0; k < 3; ++k) m[j][k] += a[i][j] * a[i][k];
        }
    }
    auto det3 = [](const double mm[3][3]) {
        return mm[0][0] * (mm[1][1] * mm[2][2] - mm[1][2] * mm[2][1]) -
               mm[0][1] * (mm[1][0] * mm[2][2] - mm[1][2] * mm[2][0]) +
               mm[0][2] * (mm[1][0] * mm[2][1] - mm[1][1] * mm[2][0]);
    };
    const double d = det3(m);
    std::array<double, 3> x{};
    for (int col = 0; col < 3; ++col) {
        double mc[3][3];
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) mc[j][k] = (k == col) ? r[j] : m[j][k];
        x[col] = det3(mc) / d;
    }
    return x;
}

} // namespace

TEST_CASE("normalize: two-point symmetry with population std") {
    std::vector<StatePoint> pts = {{300.0, 1.0, 1.0e-3, 1.0}, {301.0, 2.0, 1.1e-3, 3.0}};
    const NormalizedData nd = normalize(pts);
    CHECK(nd.stats.mean_e == Approx(2.0));
    CHECK(nd.stats.std_e == Approx(1.0)); // population convention
    CHECK(nd.e_tilde[0] == Approx(-1.0));
    CHECK(nd.e_tilde[1] == Approx(1.0));
}

TEST_CASE("normalize: scaled e and p are centered") {
    const FitWindow w = synthetic_window(kGenParams, 275e6, 300e6, 6, 300.0, 325.0, 26);
    const NormalizedData nd = normalize(w.points);
    double se = 0, sp = 0;
    for (std::size_t i = 0; i < nd.e_tilde.size(); ++i) {
        se += nd.e_tilde[i];
        sp += nd.p_tilde[i];
    }
    CHECK(std::abs(se / static_cast<double>(nd.e_tilde.size())) < 1e-12);
    CHECK(std::abs(sp / static_cast<double>(nd.p_tilde.size())) < 1e-12);
}

TEST_CASE("normalize: degenerate variance is rejected") {
    std::vector<StatePoint> pts = {{300.0, 1.0, 1.0e-3, 5.0}, {301.0, 2.0, 1.1e-3, 5.0}};
    CHECK_THROWS_AS(normalize(pts), DegenerateWindowError);
    std::vector<StatePoint> one = {{300.0, 1.0, 1.0e-3, 5.0}};
    CHECK_THROWS_AS(normalize(one), DegenerateWindowError);
}

TEST_CASE("solve_linear_ls: consistent system has negligible residual") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::array<double, 3>> a(20);
    std::vector<double> b(20);
    const double x0 = 0.3, x1 = -1.7, x2 = 2.5;
    double bn = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = {u(rng), u(rng), 1.0};
        b[i] = x0 * a[i][0] + x1 * a[i][1] + x2 * a[i][2];
        bn += b[i] * b[i];
    }
    const LsSolution sol = solve_linear_ls(a, b);
    CHECK(sol.residual_norm <= 1e-12 * std::sqrt(bn));
    CHECK(sol.coeffs.a_tilde == Approx(x0).epsilon(1e-12));
    CHECK(sol.coeffs.b_tilde == Approx(x1).epsilon(1e-12));
    CHECK(sol.coeffs.c_tilde == Approx(x2).epsilon(1e-12));
}

TEST_CASE("solve_linear_ls: 3x3 square system matches a direct solve") {
    std::vector<std::array<double, 3>> a = {{2.0, 1.0, 1.0}, {1.0, 3.0, 1.0}, {1.0, 1.0, 4.0}};
    std::vector<double> b = {7.0, 10.0, 15.0};
    const auto oracle = normal_equations_cramer(a, b); // exact for square nonsingular
    const LsSolution sol = solve_linear_ls(a, b);
    CHECK(sol.coeffs.a_tilde == Approx(oracle[0]).epsilon(1e-12));
    CHECK(sol.coeffs.b_tilde == Approx(oracle[1]).epsilon(1e-12));
    CHECK(sol.coeffs.c_tilde == Approx(oracle[2]).epsilon(1e-12));
}

TEST_CASE("solve_linear_ls: matches the normal-equations oracle on a random N=100 system") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::array<double, 3>> a(100);
    std::vector<double> b(100);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = {u(rng), u(rng), 1.0};
        b[i] = u(rng);
    }
    const auto oracle = normal_equations_cramer(a, b);
    const LsSolution sol = solve_linear_ls(a, b);
    CHECK(sol.coeffs.a_tilde == Approx(oracle[0]).epsilon(1e-9));
    CHECK(sol.coeffs.b_tilde == Approx(oracle[1]).epsilon(1e-9));
    CHECK(sol.coeffs.c_tilde == Approx(oracle[2]).epsilon(1e-9));
    CHECK(sol.orthogonality <= 1e-8);
}

TEST_CASE("solve_linear_ls: rank-deficient design is rejected with estimated rank") {
    std::vector<std::array<double, 3>> a(10);
    std::vector<double> b(10, 1.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = static_cast<double>(i);
        a[i] = {t, 2.0 * t, 1.0}; // second column is a multiple of the first
    }
    try {
        solve_linear_ls(a, b);
        FAIL("expected DegenerateWindowError");
    } catch (const DegenerateWindowError& ex) {
        CHECK(ex.estimated_rank() == 2);
    }
}

TEST_CASE("descale: identity stats is the identity transform") {
    const NormalizationStats id{0.0, 1.0, 0.0, 1.0, 1.0};
    const EnergyCoefficients abc = descale({1.5, -2.0, 0.25}, id);
    CHECK(abc.a == Approx(1.5));
    CHECK(abc.b == Approx(-2.0));
    CHECK(abc.c == Approx(0.25));
}

TEST_CASE("descale: A_tilde = 0 kills the shift term") {
    const NormalizationStats st{10.0, 2.0, 5.0, 3.0, 0.5};
    const EnergyCoefficients abc = descale({0.0, 4.0, 1.0}, st);
    CHECK(abc.a == 0.0);
    CHECK(abc.b == Approx(st.std_e * 4.0 / st.mean_v));
    CHECK(abc.c == Approx(st.mean_e + st.std_e * 1.0));
}

TEST_CASE("descale composed with normalize recovers ideal-gas coefficients") {
    const SgParams ideal{1.4, 0.0, 0.0, 717.0};
    const FitWindow w = synthetic_window(ideal, 1e5, 2e5, 6, 300.0, 325.0, 26);
    const NormalizedData nd = normalize(w.points);
    std::vector<std::array<double, 3>> design(w.points.size());
    for (std::size_t i = 0; i < w.points.size(); ++i)
        design[i] = {nd.p_tilde[i] * nd.v_tilde[i], nd.v_tilde[i], 1.0};
    const LsSolution sol = solve_linear_ls(design, nd.e_tilde);
    const EnergyCoefficients abc = descale(sol.coeffs, nd.stats);
    CHECK(abc.a == Approx(2.5).epsilon(1e-9));
    CHECK(std::abs(abc.b) <= 1e-9 * nd.stats.std_e / nd.stats.mean_v);
    CHECK(std::abs(abc.c) <= 1e-9 * nd.stats.std_e + 1e-9 * std::abs(nd.stats.mean_e));
}

TEST_CASE("params_from_ABC") {
    const PressureFit ideal = params_from_ABC(2.5, 0.0, 0.0);
    CHECK(ideal.gamma == Approx(1.4).epsilon(1e-14));
    CHECK(ideal.p_inf == 0.0);
    CHECK(ideal.q == 0.0);

    const double a = 1.0 / 0.2424;
    CHECK(params_from_ABC(a, 1.0, 0.0).gamma == Approx(1.2424).epsilon(1e-12));

    const PressureFit limit = params_from_ABC(1e12, 1.0, 0.0);
    CHECK(limit.gamma == Approx(1.0).epsilon(1e-11));
    CHECK(limit.p_inf == Approx(1e-12).epsilon(1e-6));

    CHECK_THROWS_AS(params_from_ABC(0.0, 1.0, 0.0), InvalidFitError);
    CHECK_THROWS_AS(params_from_ABC(-1.0, 1.0, 0.0), InvalidFitError);
}

TEST_CASE("fit_pressure recovers a published-cell generator on a 6x26 grid") {
    const FitWindow w = synthetic_window(kGenParams, 275e6, 300e6, 6, 300.0, 325.0, 26);
    const PressureFit fit = fit_pressure(w);
    CHECK(fit.gamma == Approx(kGenParams.gamma).epsilon(1e-8));
    CHECK(fit.q == Approx(kGenParams.q).epsilon(1e-8));
    CHECK(fit.p_inf == Approx(kGenParams.p_inf).epsilon(1e-8));
}

TEST_CASE("fit_pressure on ideal-gas data") {
    const SgParams ideal{1.4, 0.0, 0.0, 717.0};
    const FitWindow w = synthetic_window(ideal, 1e5, 2e5, 6, 300.0, 325.0, 26);
    const NormalizedData nd = normalize(w.points);
    const PressureFit fit = fit_pressure(w);
    CHECK(fit.gamma == Approx(1.4).epsilon(1e-9));
    CHECK(std::abs(fit.q) <= 1e-6 * nd.stats.std_e);
    CHECK(std::abs(fit.p_inf) <= 1e-6 * nd.stats.std_p);
}

TEST_CASE("fit_pressure is invariant under alternative normalization constants") {
    const FitWindow w = synthetic_window(kGenParams, 275e6, 300e6, 6, 300.0, 325.0, 26, 0.01, 5);
    const PressureFit base = fit_pressure(w);

    NormalizationStats alt = normalize(w.points).stats;
    alt.mean_e += 0.37 * alt.std_e;
    alt.std_e *= 2.9;
    alt.mean_p -= 1.4 * alt.std_p;
    alt.std_p *= 0.31;
    alt.mean_v *= 1.7;
    const PressureFit other = fit_pressure(w, alt);
    CHECK(other.gamma == Approx(base.gamma).epsilon(1e-9));
    CHECK(other.q == Approx(base.q).epsilon(1e-9));
    CHECK(other.p_inf == Approx(base.p_inf).epsilon(1e-9));
}

TEST_CASE("fit_pressure propagates degeneracy errors") {
    FitWindow w{1e5, 2e5, 300.0, 325.0, {}};
    CHECK_THROWS_AS(fit_pressure(w), DegenerateWindowError);
    // all points on one isobar: fewer than 2 distinct pressures
    const SgParams ideal{1.4, 0.0, 0.0, 717.0};
    const Dataset ds = synthesize(ideal, std::vector<double>{1e5}, linspace(300.0, 325.0, 26));
    FitWindow iso{0.5e5, 2e5, 300.0, 325.0, ds.points};
    CHECK_THROWS_AS(fit_pressure(iso), DegenerateWindowError);
}

TEST_CASE("fit_temperature recovers an exact generator") {
    const SgParams sg{1.3, -5e6, 1e9, 4000.0};
    const FitWindow w = synthetic_window(sg, 30e6, 50e6, 5, 300.0, 325.0, 26);
    CHECK(fit_temperature(w, sg.gamma, sg.q, sg.p_inf) == Approx(4000.0).epsilon(1e-12));
}

TEST_CASE("fit_temperature with a single point interpolates exactly") {
    FitWindow w{1e5, 2e5, 300.0, 325.0, {{310.0, 1.5e5, 1.0e-3, 2.0e5}}};
    const double q = -1e4, p_inf = 1e7;
    const double x = 2.0e5 - q - p_inf * 1.0e-3;
    CHECK(fit_temperature(w, 1.4, q, p_inf) == Approx(x / 310.0).epsilon(1e-14));
}

TEST_CASE("fit_temperature error paths") {
    FitWindow empty{1e5, 2e5, 300.0, 325.0, {}};
    CHECK_THROWS_AS(fit_temperature(empty, 1.4, 0.0, 0.0), DegenerateWindowError);

    // x = e - q - p_inf v identically zero
    FitWindow zero{1e5, 2e5, 300.0, 325.0, {{310.0, 1.5e5, 1.0e-3, 1.0e4}}};
    CHECK_THROWS_AS(fit_temperature(zero, 1.4, 0.0, 1.0e7), DegenerateWindowError);

    // negative slope: temperature anti-correlated with x
    FitWindow neg{1e5, 2e5, 300.0, 325.0,
                  {{320.0, 1.5e5, 1.0e-3, 1.0e4}, {300.0, 1.6e5, 1.0e-3, 2.0e4}}};
    CHECK_THROWS_AS(fit_temperature(neg, 1.4, 3.0e4, 0.0), InvalidFitError);
}

TEST_CASE("relative_error") {
    const std::vector<double> a{1.0, 2.0}, b{1.0, 1.0};
    CHECK(relative_error(a, a) == 0.0);
    CHECK(relative_error(a, b) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    const std::vector<double> z{0.0, 0.0};
    CHECK_THROWS_AS(relative_error(a, z), DomainError);
    const std::vector<double> short_v{1.0};
    CHECK_THROWS_AS(relative_error(a, short_v), DomainError);
}

TEST_CASE("fit_window: noiseless synthetic data gives tiny errors and true flags") {
    const FitWindow w = synthetic_window(kGenParams, 275e6, 300e6, 6, 300.0, 325.0, 26);
    const FitResult r = fit_window(w);
    CHECK(r.eps_p <= 1e-8);
    CHECK(r.eps_T <= 1e-8);
    CHECK(r.valid());
    CHECK(r.n_points == 6 * 26);
}

TEST_CASE("fit_window: 1% noise gives errors of order 1e-2 with valid flags") {
    const FitWindow w = synthetic_window(kGenParams, 275e6, 300e6, 6, 300.0, 325.0, 26, 0.01, 3);
    const FitResult r = fit_window(w);
    CHECK(r.eps_p > 1e-4);
    CHECK(r.eps_p < 1e-1);
    CHECK(r.valid());
}

TEST_CASE("property: fit recovers random generators from noiseless grids") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> gam(1.05, 3.0), pinf(0.0, 5e9), q(-2e7, 0.0),
        cv(1e3, 5e4);
    for (int trial = 0; trial < 25; ++trial) {
        const SgParams sg{gam(rng), q(rng), pinf(rng), cv(rng)};
        const FitWindow w = synthetic_window(sg, 25e6, 300e6, 5, 300.0, 625.0, 5);
        const FitResult r = fit_window(w);
        CHECK(r.params.gamma == Approx(sg.gamma).epsilon(1e-7));
        CHECK(r.params.q == Approx(sg.q).epsilon(1e-7));
        CHECK(r.params.p_inf == Approx(sg.p_inf).epsilon(1e-7).margin(1e-3));
        CHECK(r.params.c_v == Approx(sg.c_v).epsilon(1e-7));
    }
}

TEST_CASE("property: permuting window points does not change the result") {
    FitWindow w = synthetic_window(kGenParams, 275e6, 300e6, 6, 300.0, 325.0, 26, 0.005, 11);
    const FitResult base = fit_window(w);
    std::mt19937_64 rng(5);
    std::shuffle(w.points.begin(), w.points.end(), rng);
    const FitResult perm = fit_window(w);
    CHECK(perm.params.gamma == Approx(base.params.gamma).epsilon(1e-12));
    CHECK(perm.params.q == Approx(base.params.q).epsilon(1e-12));
    CHECK(perm.params.p_inf == Approx(base.params.p_inf).epsilon(1e-12));
    CHECK(perm.params.c_v == Approx(base.params.c_v).epsilon(1e-12));
    CHECK(perm.eps_p == Approx(base.eps_p).epsilon(1e-12));
    CHECK(perm.eps_T == Approx(base.eps_T).epsilon(1e-12));
}
