#ifndef SGFIT_FITTING_HPP
#define SGFIT_FITTING_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sgfit/eos.hpp"
#include "sgfit/errors.hpp"

namespace sgfit {

/// Centering/scaling constants of one window's data (population standard
/// deviation convention).
struct NormalizationStats {
    double mean_e; ///< J/kg
    double std_e;  ///< J/kg
    double mean_p; ///< Pa
    double std_p;  ///< Pa
    double mean_v; ///< m^3/kg
};

/// Dimensionless coefficients of the normalized energy model
/// e~ = A~ p~ v~ + B~ v~ + C~.
struct ScaledCoefficients {
    double a_tilde;
    double b_tilde;
    double c_tilde;
};

/// Unscaled bilinear-energy coefficients e = A p v + B v + C.
struct EnergyCoefficients {
    double a;
    double b;
    double c;
};

/// The three pressure-model parameters produced by the first fitting stage.
struct PressureFit {
    double gamma;
    double q;
    double p_inf;
};

/// A pressure range x temperature range cell together with its member points.
struct FitWindow {
    double p_min; ///< Pa
    double p_max; ///< Pa
    double T_min; ///< K
    double T_max; ///< K
    std::vector<StatePoint> points;

    std::size_t distinct_p() const {
        std::set<double> s;
        for (const auto& pt : points) s.insert(pt.p);
        return s.size();
    }
    std::size_t distinct_v() const {
        std::set<double> s;
        for (const auto& pt : points) s.insert(pt.v);
        return s.size();
    }

    /// True when the window can support the 3-column pressure fit.
    bool fittable() const {
        return points.size() >= 4 && distinct_p() >= 2 && distinct_v() >= 2;
    }

    void validate() const {
        if (!(p_min < p_max) || !(T_min < T_max))
            throw DomainError("FitWindow: empty (p, T) range");
        for (const auto& pt : points)
            if (pt.p < p_min || pt.p > p_max || pt.T < T_min || pt.T > T_max)
                throw DomainError("FitWindow: point outside window range");
        if (!fittable())
            throw DegenerateWindowError(
                "FitWindow: need >= 4 points with >= 2 distinct p and v values (have " +
                std::to_string(points.size()) + " points, " +
                std::to_string(distinct_p()) + " distinct p, " +
                std::to_string(distinct_v()) + " distinct v)");
    }
};

/// Fitted parameters for one window plus fit diagnostics and validity flags.
struct FitResult {
    SgParams params;
    double eps_p;    ///< relative l2 error of the pressure model over the window
    double eps_T;    ///< relative l2 error of the temperature model
    std::size_t n_points;
    bool positive_pressure;
    bool positive_temperature;
    bool gamma_gt_one;

    bool valid() const { return positive_pressure && positive_temperature && gamma_gt_one; }
};

/// Normalized design data for one window.
struct NormalizedData {
    std::vector<double> e_tilde;
    std::vector<double> p_tilde;
    std::vector<double> v_tilde;
    NormalizationStats stats;
};

/// Center and scale (e, p) affinely and v linearly:
/// e~ = (e - mean)/std, p~ = (p - mean)/std, v~ = v/mean.
inline NormalizedData normalize(std::span<const StatePoint> points) {
    const std::size_t n = points.size();
    if (n < 2)
        throw DegenerateWindowError("normalize: need at least 2 points");

    double sum_e = 0, sum_p = 0, sum_v = 0;
    for (const auto& pt : points) {
        sum_e += pt.e;
        sum_p += pt.p;
        sum_v += pt.v;
    }
    NormalizationStats st{};
    st.mean_e = sum_e / static_cast<double>(n);
    st.mean_p = sum_p / static_cast<double>(n);
    st.mean_v = sum_v / static_cast<double>(n);

    double ss_e = 0, ss_p = 0;
    for (const auto& pt : points) {
        ss_e += (pt.e - st.mean_e) * (pt.e - st.mean_e);
        ss_p += (pt.p - st.mean_p) * (pt.p - st.mean_p);
    }
    st.std_e = std::sqrt(ss_e / static_cast<double>(n));
    st.std_p = std::sqrt(ss_p / static_cast<double>(n));

    if (st.std_e == 0.0)
        throw DegenerateWindowError("normalize: internal energy has zero variance");
    if (st.std_p == 0.0)
        throw DegenerateWindowError("normalize: pressure has zero variance");
    if (!(st.mean_v > 0.0))
        throw DegenerateWindowError("normalize: mean specific volume is not positive");

    NormalizedData out;
    out.stats = st;
    out.e_tilde.reserve(n);
    out.p_tilde.reserve(n);
    out.v_tilde.reserve(n);
    for (const auto& pt : points) {
        out.e_tilde.push_back((pt.e - st.mean_e) / st.std_e);
        out.p_tilde.push_back((pt.p - st.mean_p) / st.std_p);
        out.v_tilde.push_back(pt.v / st.mean_v);
    }
    return out;
}

/// Result of the small dense least-squares solve.
struct LsSolution {
    ScaledCoefficients coeffs;
    double residual_norm;  ///< ||design x - rhs||_2
    double orthogonality;  ///< ||design^T r|| / (||design||_F ||r|| + tiny)
};

/// Minimize ||design x - rhs||_2 for an N x 3 design matrix via Householder QR.
/// Throws DegenerateWindowError (with the estimated rank) when the columns are
/// numerically dependent.
inline LsSolution solve_linear_ls(std::vector<std::array<double, 3>> design,
                                  std::vector<double> rhs) {
    constexpr std::size_t kCols = 3;
    const std::size_t n = design.size();
    if (rhs.size() != n)
        throw DomainError("solve_linear_ls: design/rhs size mismatch");
    if (n < kCols)
        throw DegenerateWindowError("solve_linear_ls: fewer rows than columns",
                                    static_cast<int>(n));

    const auto original = design;
    const auto original_rhs = rhs;

    double frob = 0.0;
    for (const auto& row : design)
        for (double x : row) frob += x * x;
    frob = std::sqrt(frob);

    // Householder triangularization, applying reflectors to rhs as we go.
    std::array<double, kCols> diag{};
    for (std::size_t k = 0; k < kCols; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < n; ++i) norm += design[i][k] * design[i][k];
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            diag[k] = 0.0; // column already zero below (and at) the diagonal
            continue;
        }
        // pick the sign that avoids cancellation in the reflector pivot
        if (design[k][k] < 0.0) norm = -norm;
        diag[k] = -norm;

        for (std::size_t i = k; i < n; ++i) design[i][k] /= norm;
        design[k][k] += 1.0;

        for (std::size_t j = k + 1; j < kCols; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += design[i][k] * design[i][j];
            s = -s / design[k][k];
            for (std::size_t i = k; i < n; ++i) design[i][j] += s * design[i][k];
        }
        double s = 0.0;
        for (std::size_t i = k; i < n; ++i) s += design[i][k] * rhs[i];
        s = -s / design[k][k];
        for (std::size_t i = k; i < n; ++i) rhs[i] += s * design[i][k];
    }

    // Rank test on the R diagonal relative to the matrix scale.
    const double rank_tol = 1e-12 * std::max(frob, 1.0);
    int rank = 0;
    for (std::size_t k = 0; k < kCols; ++k)
        if (std::abs(diag[k]) > rank_tol) ++rank;
    if (rank < static_cast<int>(kCols))
        throw DegenerateWindowError(
            "solve_linear_ls: design matrix is rank-deficient (estimated rank " +
            std::to_string(rank) + ")", rank);

    // Back substitution: R x = Q^T rhs.
    std::array<double, kCols> x{};
    for (std::size_t kk = kCols; kk-- > 0;) {
        double s = rhs[kk];
        for (std::size_t j = kk + 1; j < kCols; ++j) s -= design[kk][j] * x[j];
        x[kk] = s / diag[kk];
    }

    LsSolution sol;
    sol.coeffs = ScaledCoefficients{x[0], x[1], x[2]};

    std::array<double, kCols> atr{};
    double rr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double ri = original_rhs[i];
        for (std::size_t j = 0; j < kCols; ++j) ri -= original[i][j] * x[j];
        rr += ri * ri;
        for (std::size_t j = 0; j < kCols; ++j) atr[j] += original[i][j] * ri;
    }
    sol.residual_norm = std::sqrt(rr);
    const double atr_norm = std::sqrt(atr[0] * atr[0] + atr[1] * atr[1] + atr[2] * atr[2]);
    double rhs_norm = 0.0;
    for (double v : original_rhs) rhs_norm += v * v;
    rhs_norm = std::sqrt(rhs_norm);
    const double x_norm = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    // guards residuals at or below rounding level (including r = 0), where
    // orthogonality cannot be resolved
    const double tiny = 1e-5 * frob * (frob * x_norm + rhs_norm);
    sol.orthogonality = atr_norm / (frob * sol.residual_norm + tiny);
    return sol;
}

/// Map scaled coefficients back to the physical model e = A p v + B v + C.
inline EnergyCoefficients descale(const ScaledCoefficients& sc, const NormalizationStats& st) {
    EnergyCoefficients out;
    out.a = st.std_e * sc.a_tilde / (st.std_p * st.mean_v);
    out.b = (st.std_e / st.mean_v) * (sc.b_tilde - sc.a_tilde * st.mean_p / st.std_p);
    out.c = st.mean_e + st.std_e * sc.c_tilde;
    return out;
}

/// gamma = 1/A + 1, p_inf = (gamma - 1) B / gamma = B / (A + 1), q = C.
inline PressureFit params_from_ABC(double a, double b, double c) {
    if (!(a > 0.0))
        throw InvalidFitError("params_from_ABC: A = " + std::to_string(a) +
                              " <= 0 implies gamma <= 1");
    PressureFit fit;
    fit.gamma = 1.0 / a + 1.0;
    fit.p_inf = b / (a + 1.0);
    fit.q = c;
    return fit;
}

namespace detail {
inline PressureFit fit_pressure_with_stats(const FitWindow& window,
                                           const NormalizationStats& st) {
    const std::size_t n = window.points.size();
    std::vector<std::array<double, 3>> design(n);
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& pt = window.points[i];
        const double pt_scaled = (pt.p - st.mean_p) / st.std_p;
        const double vt_scaled = pt.v / st.mean_v;
        design[i] = {pt_scaled * vt_scaled, vt_scaled, 1.0};
        rhs[i] = (pt.e - st.mean_e) / st.std_e;
    }
    const LsSolution sol = solve_linear_ls(std::move(design), std::move(rhs));
    const EnergyCoefficients abc = descale(sol.coeffs, st);
    return params_from_ABC(abc.a, abc.b, abc.c);
}
} // namespace detail

/// Stage 1 of the decoupled procedure: normalize, solve the 3-parameter
/// least-squares problem, descale, and back out (gamma, q, p_inf).
inline PressureFit fit_pressure(const FitWindow& window) {
    window.validate();
    const NormalizedData nd = normalize(window.points);
    return detail::fit_pressure_with_stats(window, nd.stats);
}

/// Same procedure with caller-chosen normalization constants.  Any positive
/// std_e, std_p, mean_v and any finite shifts yield the same physical
/// parameters; the default stats merely keep the solve well conditioned.
inline PressureFit fit_pressure(const FitWindow& window, const NormalizationStats& stats) {
    window.validate();
    if (!(stats.std_e > 0.0 && stats.std_p > 0.0 && stats.mean_v > 0.0))
        throw DegenerateWindowError("fit_pressure: normalization stats must have positive scales");
    return detail::fit_pressure_with_stats(window, stats);
}

/// Stage 2: closed-form one-parameter fit of T = D (e - q - p_inf v), c_v = 1/D.
inline double fit_temperature(const FitWindow& window, double gamma, double q, double p_inf) {
    (void)gamma; // fixed by stage 1; not used by the closed form
    if (window.points.empty())
        throw DegenerateWindowError("fit_temperature: empty window");

    double sxx = 0.0, sxt = 0.0;
    for (const auto& pt : window.points) {
        const double x = pt.e - q - p_inf * pt.v;
        sxx += x * x;
        sxt += x * pt.T;
    }
    if (sxx == 0.0)
        throw DegenerateWindowError("fit_temperature: e - q - p_inf v is identically zero");
    const double d = sxt / sxx;
    if (!(d > 0.0))
        throw InvalidFitError("fit_temperature: D = " + std::to_string(d) +
                              " <= 0 implies c_v <= 0");
    return 1.0 / d;
}

/// Discrete relative l2 error ||model - data|| / ||data||.
inline double relative_error(std::span<const double> model, std::span<const double> data) {
    if (model.size() != data.size() || data.empty())
        throw DomainError("relative_error: vectors must have equal nonzero length");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        num += (model[i] - data[i]) * (model[i] - data[i]);
        den += data[i] * data[i];
    }
    if (den == 0.0)
        throw DomainError("relative_error: data vector has zero norm");
    return std::sqrt(num) / std::sqrt(den);
}

/// Run both fitting stages on a window and evaluate errors and validity flags.
/// A result with a false flag is returned, not thrown.
inline FitResult fit_window(const FitWindow& window) {
    const PressureFit pf = fit_pressure(window);
    const double c_v = fit_temperature(window, pf.gamma, pf.q, pf.p_inf);

    FitResult res;
    res.params = SgParams{pf.gamma, pf.q, pf.p_inf, c_v};
    res.n_points = window.points.size();
    res.gamma_gt_one = pf.gamma > 1.0;

    const std::size_t n = window.points.size();
    std::vector<double> p_model(n), p_data(n), t_model(n), t_data(n);
    res.positive_pressure = true;
    res.positive_temperature = true;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& pt = window.points[i];
        p_model[i] = (pf.gamma - 1.0) * (pt.e - pf.q) / pt.v - pf.gamma * pf.p_inf;
        p_data[i] = pt.p;
        t_model[i] = (pt.e - pf.q - pf.p_inf * pt.v) / c_v;
        t_data[i] = pt.T;
        if (!(p_model[i] > 0.0)) res.positive_pressure = false;
        if (!(t_model[i] > 0.0)) res.positive_temperature = false;
    }
    res.eps_p = relative_error(p_model, p_data);
    res.eps_T = relative_error(t_model, t_data);
    return res;
}

} // namespace sgfit

#endif // SGFIT_FITTING_HPP
