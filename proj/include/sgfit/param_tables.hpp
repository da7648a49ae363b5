#ifndef SGFIT_PARAM_TABLES_HPP
#define SGFIT_PARAM_TABLES_HPP

#include <array>
#include <cstddef>
#include <cstdio>
#include <string>

#include "sgfit/eos.hpp"
#include "sgfit/errors.hpp"

namespace sgfit {

/// How lookup_range combines the parameters of intersected cells.
enum class AveragingScheme {
    AreaWeighted, ///< weights proportional to the intersection area in (p, T) space
    Uniform       ///< plain mean over intersected cells
};

/// The published 11 x 13 parameter grid: 25 MPa pressure rows from 25 to
/// 300 MPa, 25 K temperature columns from 300 to 625 K.  Values are stored at
/// printed precision in the published scalings (gamma; -q x 1e-6; p_inf x 1e-9;
/// c_v x 1e-4) and rescaled to SI on access.
class ParamTable {
public:
    static constexpr std::size_t kRows = 11; ///< pressure ranges
    static constexpr std::size_t kCols = 13; ///< temperature ranges

    static constexpr double p_edge(std::size_t i) { return 25e6 + 25e6 * static_cast<double>(i); }
    static constexpr double T_edge(std::size_t j) { return 300.0 + 25.0 * static_cast<double>(j); }

    static constexpr double p_min() { return p_edge(0); }
    static constexpr double p_max() { return p_edge(kRows); }
    static constexpr double T_min() { return T_edge(0); }
    static constexpr double T_max() { return T_edge(kCols); }

    /// Tabulated values in published scalings.
    static constexpr double gamma_scaled(std::size_t i, std::size_t j) { return kGamma[i][j]; }
    static constexpr double minus_q_scaled(std::size_t i, std::size_t j) { return kMinusQ[i][j]; }
    static constexpr double p_inf_scaled(std::size_t i, std::size_t j) { return kPInf[i][j]; }
    static constexpr double c_v_scaled(std::size_t i, std::size_t j) { return kCv[i][j]; }

    /// SI parameters of cell (i, j).
    static constexpr SgParams cell(std::size_t i, std::size_t j) {
        return SgParams{kGamma[i][j], -kMinusQ[i][j] * 1e6, kPInf[i][j] * 1e9, kCv[i][j] * 1e4};
    }

    /// Cell containing (p, T) under half-open ranges; the top edges map to the
    /// last cell.  Throws TableRangeError outside [25, 300] MPa x [300, 625] K.
    static SgParams lookup(double p, double T) {
        return cell(row_of(p), col_of(T));
    }

    /// Parameter-wise average over the cells intersecting
    /// [p_lo, p_hi] x [T_lo, T_hi].  Degenerate (point) queries are allowed and
    /// reduce to lookup.
    static SgParams lookup_range(double p_lo, double p_hi, double T_lo, double T_hi,
                                 AveragingScheme scheme = AveragingScheme::AreaWeighted) {
        if (p_lo > p_hi || T_lo > T_hi)
            throw TableRangeError("lookup_range: inverted range");
        if (p_hi < p_min() || p_lo > p_max() || T_hi < T_min() || T_lo > T_max())
            throw TableRangeError("lookup_range: range does not intersect the table domain");
        if (p_lo == p_hi && T_lo == T_hi)
            return lookup(p_lo, T_lo);

        double wsum = 0.0, g = 0.0, q = 0.0, pi = 0.0, cv = 0.0;
        for (std::size_t i = 0; i < kRows; ++i) {
            const double dp = overlap(p_lo, p_hi, p_edge(i), p_edge(i + 1));
            if (dp <= 0.0 && !(p_lo == p_hi && p_lo >= p_edge(i) && p_lo <= p_edge(i + 1)))
                continue;
            for (std::size_t j = 0; j < kCols; ++j) {
                const double dT = overlap(T_lo, T_hi, T_edge(j), T_edge(j + 1));
                double w;
                if (scheme == AveragingScheme::Uniform) {
                    // count every intersected cell equally; zero-measure
                    // overlaps at shared edges count only on the lower side
                    const bool p_hit = dp > 0.0 || (p_lo == p_hi && row_contains(i, p_lo));
                    const bool T_hit = dT > 0.0 || (T_lo == T_hi && col_contains(j, T_lo));
                    if (!p_hit || !T_hit) continue;
                    w = 1.0;
                } else {
                    const double wp = (p_lo == p_hi) ? (row_contains(i, p_lo) ? 1.0 : 0.0) : dp;
                    const double wT = (T_lo == T_hi) ? (col_contains(j, T_lo) ? 1.0 : 0.0) : dT;
                    w = wp * wT;
                    if (w <= 0.0) continue;
                }
                const SgParams c = cell(i, j);
                wsum += w;
                g += w * c.gamma;
                q += w * c.q;
                pi += w * c.p_inf;
                cv += w * c.c_v;
            }
        }
        if (wsum <= 0.0)
            throw TableRangeError("lookup_range: empty intersection with the table domain");
        return SgParams{g / wsum, q / wsum, pi / wsum, cv / wsum};
    }

    /// Which of the four published tables to export.
    enum class Parameter { Gamma, MinusQ, PInf, Cv };

    static constexpr double scaled_value(Parameter which, std::size_t i, std::size_t j) {
        switch (which) {
            case Parameter::Gamma: return kGamma[i][j];
            case Parameter::MinusQ: return kMinusQ[i][j];
            case Parameter::PInf: return kPInf[i][j];
            default: return kCv[i][j];
        }
    }

    static std::string range_label_p(std::size_t i) {
        return std::to_string(static_cast<int>(p_edge(i) / 1e6)) + "-" +
               std::to_string(static_cast<int>(p_edge(i + 1) / 1e6));
    }
    static std::string range_label_T(std::size_t j) {
        return std::to_string(static_cast<int>(T_edge(j))) + "-" +
               std::to_string(static_cast<int>(T_edge(j + 1)));
    }

private:
    static double overlap(double lo1, double hi1, double lo2, double hi2) {
        const double lo = lo1 > lo2 ? lo1 : lo2;
        const double hi = hi1 < hi2 ? hi1 : hi2;
        return hi - lo;
    }
    static bool row_contains(std::size_t i, double p) {
        return p >= p_edge(i) && (p < p_edge(i + 1) || (i + 1 == kRows && p == p_max()));
    }
    static bool col_contains(std::size_t j, double T) {
        return T >= T_edge(j) && (T < T_edge(j + 1) || (j + 1 == kCols && T == T_max()));
    }
    static std::size_t row_of(double p) {
        if (!(p >= p_min()))
            throw TableRangeError("lookup: p = " + std::to_string(p / 1e6) +
                                  " MPa is below the 25 MPa table floor");
        if (!(p <= p_max()))
            throw TableRangeError("lookup: p = " + std::to_string(p / 1e6) +
                                  " MPa exceeds the 300 MPa table ceiling");
        std::size_t i = static_cast<std::size_t>((p - p_min()) / 25e6);
        if (i >= kRows) i = kRows - 1; // top edge maps to last cell
        return i;
    }
    static std::size_t col_of(double T) {
        if (!(T >= T_min()))
            throw TableRangeError("lookup: T = " + std::to_string(T) +
                                  " K is below the 300 K table floor");
        if (!(T <= T_max()))
            throw TableRangeError("lookup: T = " + std::to_string(T) +
                                  " K exceeds the 625 K table ceiling");
        std::size_t j = static_cast<std::size_t>((T - T_min()) / 25.0);
        if (j >= kCols) j = kCols - 1;
        return j;
    }

    // Published parameter grids.  Rows: 25-50 ... 275-300 MPa.
    // Columns: 300-325 ... 600-625 K.
    static constexpr double kGamma[kRows][kCols] = {
        {1.2424, 1.3381, 1.4135, 1.4712, 1.5140, 1.5442, 1.5618, 1.5698, 1.5684, 1.5590, 1.5429, 1.5207, 1.5014},
        {1.2637, 1.3538, 1.4263, 1.4822, 1.5247, 1.5556, 1.5741, 1.5849, 1.5860, 1.5804, 1.5687, 1.5517, 1.5305},
        {1.2855, 1.3696, 1.4384, 1.4935, 1.5361, 1.5654, 1.5848, 1.5966, 1.6008, 1.5982, 1.5898, 1.5768, 1.5604},
        {1.3074, 1.3856, 1.4512, 1.5049, 1.5450, 1.5751, 1.5969, 1.6088, 1.6135, 1.6137, 1.6069, 1.5969, 1.5830},
        {1.3292, 1.4018, 1.4638, 1.5152, 1.5551, 1.5862, 1.6061, 1.6197, 1.6262, 1.6263, 1.6221, 1.6135, 1.6026},
        {1.3507, 1.4178, 1.4767, 1.5259, 1.5653, 1.5951, 1.6162, 1.6292, 1.6366, 1.6386, 1.6355, 1.6286, 1.6192},
        {1.3718, 1.4337, 1.4894, 1.5368, 1.5748, 1.6048, 1.6261, 1.6405, 1.6472, 1.6497, 1.6474, 1.6415, 1.6331},
        {1.3924, 1.4494, 1.5020, 1.5475, 1.5846, 1.6145, 1.6347, 1.6475, 1.6571, 1.6598, 1.6588, 1.6539, 1.6456},
        {1.4124, 1.4647, 1.5143, 1.5580, 1.5942, 1.6223, 1.6418, 1.6577, 1.6658, 1.6687, 1.6674, 1.6634, 1.6567},
        {1.4318, 1.4798, 1.5267, 1.5686, 1.6035, 1.6311, 1.6517, 1.6658, 1.6729, 1.6774, 1.6773, 1.6740, 1.6676},
        {1.4507, 1.4947, 1.5386, 1.5787, 1.6127, 1.6397, 1.6596, 1.6736, 1.6821, 1.6868, 1.6868, 1.6835, 1.6777},
    };

    static constexpr double kMinusQ[kRows][kCols] = {
        {10.229, 7.4583, 5.9632, 4.9684, 4.2132, 3.5888, 3.0462, 2.5478, 2.0786, 1.6228, 1.1668, 0.6981, 0.1848},
        {9.8755, 7.4981, 6.1147, 5.1651, 4.4294, 3.8227, 3.2988, 2.8197, 2.3782, 1.9534, 1.5427, 1.1368, 0.7313},
        {9.5622, 7.5243, 6.2503, 5.3350, 4.6227, 4.0381, 3.5282, 3.0660, 2.6412, 2.2377, 1.8526, 1.4788, 1.1140},
        {9.2909, 7.5404, 6.3650, 5.4912, 4.8095, 4.2369, 3.7354, 3.2894, 2.8774, 2.4897, 2.1245, 1.7713, 1.4302},
        {9.0570, 7.5490, 6.4663, 5.6351, 4.9747, 4.4108, 3.9286, 3.4929, 3.0951, 2.7200, 2.3684, 2.0318, 1.7061},
        {8.8574, 7.5549, 6.5561, 5.7668, 5.1212, 4.5792, 4.1039, 3.6825, 3.2950, 2.9321, 2.5882, 2.2640, 1.9522},
        {8.6898, 7.5581, 6.6373, 5.8862, 5.2607, 4.7347, 4.2708, 3.8573, 3.4790, 3.1262, 2.7948, 2.4823, 2.1806},
        {8.5469, 7.5620, 6.7110, 5.9958, 5.3943, 4.8756, 4.4251, 4.0254, 3.6531, 3.3108, 2.9879, 2.6815, 2.3917},
        {8.4281, 7.5648, 6.7784, 6.0979, 5.5164, 5.0104, 4.5814, 4.1800, 3.8214, 3.4837, 3.1681, 2.8705, 2.5872},
        {8.3278, 7.5687, 6.8403, 6.1928, 5.6319, 5.1434, 4.7126, 4.3229, 3.9754, 3.6472, 3.3373, 3.0477, 2.7709},
        {8.2448, 7.5748, 6.8996, 6.2827, 5.7397, 5.2651, 4.8461, 4.4662, 4.1225, 3.7963, 3.5001, 3.2141, 2.9442},
    };

    static constexpr double kPInf[kRows][kCols] = {
        {2.0132, 1.9161, 1.7911, 1.6543, 1.5109, 1.3641, 1.2150, 1.0659, 0.9181, 0.7725, 0.6299, 0.4908, 0.3565},
        {2.0822, 1.9936, 1.8757, 1.7433, 1.6030, 1.4608, 1.3162, 1.1732, 1.0316, 0.8925, 0.7582, 0.6290, 0.5064},
        {2.1495, 2.0685, 1.9556, 1.8269, 1.6915, 1.5514, 1.4105, 1.2713, 1.1350, 1.0008, 0.8713, 0.7472, 0.6301},
        {2.2155, 2.1409, 2.0329, 1.9082, 1.7750, 1.6386, 1.5023, 1.3657, 1.2309, 1.1011, 0.9746, 0.8538, 0.7389},
        {2.2800, 2.2110, 2.1066, 1.9845, 1.8555, 1.7221, 1.5867, 1.4540, 1.3237, 1.1944, 1.0713, 0.9524, 0.8398},
        {2.3434, 2.2791, 2.1785, 2.0595, 1.9314, 1.8011, 1.6685, 1.5375, 1.4096, 1.2841, 1.1614, 1.0446, 0.9335},
        {2.4056, 2.3453, 2.2482, 2.1321, 2.0050, 1.8787, 1.7486, 1.6207, 1.4924, 1.3685, 1.2482, 1.1331, 1.0226},
        {2.4667, 2.4101, 2.3158, 2.2017, 2.0785, 1.9526, 1.8232, 1.6960, 1.5726, 1.4504, 1.3321, 1.2173, 1.1076},
        {2.5262, 2.4725, 2.3810, 2.2692, 2.1485, 2.0212, 1.8973, 1.7734, 1.6506, 1.5281, 1.4096, 1.2967, 1.1884},
        {2.5851, 2.5338, 2.4450, 2.3355, 2.2164, 2.0929, 1.9686, 1.8440, 1.7219, 1.6037, 1.4869, 1.3755, 1.2671},
        {2.6430, 2.5939, 2.5071, 2.3995, 2.2822, 2.1608, 2.0383, 1.9155, 1.7957, 1.6767, 1.5631, 1.4506, 1.3432},
    };

    static constexpr double kCv[kRows][kCols] = {
        {2.6854, 1.7178, 1.2425, 0.9604, 0.7724, 0.6372, 0.5356, 0.4546, 0.3882, 0.3316, 0.2814, 0.2349, 0.1871},
        {2.5560, 1.7112, 1.2644, 0.9907, 0.8041, 0.6692, 0.5681, 0.4870, 0.4219, 0.3667, 0.3193, 0.2774, 0.2395},
        {2.4401, 1.7015, 1.2834, 1.0157, 0.8314, 0.6988, 0.5975, 0.5168, 0.4514, 0.3967, 0.3502, 0.3098, 0.2742},
        {2.3380, 1.6896, 1.2976, 1.0381, 0.8587, 0.7258, 0.6231, 0.5431, 0.4779, 0.4231, 0.3774, 0.3375, 0.3028},
        {2.2484, 1.6762, 1.3092, 1.0587, 0.8817, 0.7482, 0.6477, 0.5671, 0.5018, 0.4474, 0.4016, 0.3623, 0.3276},
        {2.1701, 1.6628, 1.3182, 1.0767, 0.9014, 0.7706, 0.6693, 0.5895, 0.5242, 0.4696, 0.4234, 0.3841, 0.3498},
        {2.1025, 1.6491, 1.3256, 1.0922, 0.9202, 0.7906, 0.6896, 0.6093, 0.5443, 0.4898, 0.4439, 0.4048, 0.3705},
        {2.0431, 1.6361, 1.3316, 1.1061, 0.9377, 0.8082, 0.7086, 0.6296, 0.5633, 0.5091, 0.4629, 0.4234, 0.3896},
        {1.9919, 1.6235, 1.3365, 1.1187, 0.9534, 0.8259, 0.7283, 0.6469, 0.5819, 0.5273, 0.4812, 0.4416, 0.4073},
        {1.9469, 1.6116, 1.3403, 1.1298, 0.9681, 0.8425, 0.7434, 0.6633, 0.5992, 0.5443, 0.4978, 0.4582, 0.4238},
        {1.9077, 1.6007, 1.3440, 1.1403, 0.9815, 0.8575, 0.7595, 0.6798, 0.6149, 0.5594, 0.5137, 0.4738, 0.4394},
    };
};

/// Render one tabulated value exactly as published: 5 significant digits with
/// trailing zeros kept (4 decimals, or 3 for values >= 10).
inline std::string format_table_value(double scaled) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), scaled >= 10.0 ? "%.3f" : "%.4f", scaled);
    return buf;
}

/// Serialize one published table as CSV in the published scaling conventions.
/// First row: temperature-range labels; first column: pressure-range labels.
inline std::string export_table_csv(ParamTable::Parameter which) {
    std::string out = "p_range_MPa";
    for (std::size_t j = 0; j < ParamTable::kCols; ++j)
        out += "," + ParamTable::range_label_T(j);
    out += '\n';
    for (std::size_t i = 0; i < ParamTable::kRows; ++i) {
        out += ParamTable::range_label_p(i);
        for (std::size_t j = 0; j < ParamTable::kCols; ++j) {
            out += ',';
            out += format_table_value(ParamTable::scaled_value(which, i, j));
        }
        out += '\n';
    }
    return out;
}

/// Markdown rendering of one published table (pressure rows, temperature
/// columns, published scalings).
inline std::string export_table_markdown(ParamTable::Parameter which) {
    std::string out = "| p (MPa) \\ T (K) |";
    for (std::size_t j = 0; j < ParamTable::kCols; ++j)
        out += " " + ParamTable::range_label_T(j) + " |";
    out += "\n|---|";
    for (std::size_t j = 0; j < ParamTable::kCols; ++j) out += "---|";
    out += '\n';
    for (std::size_t i = 0; i < ParamTable::kRows; ++i) {
        out += "| " + ParamTable::range_label_p(i) + " |";
        for (std::size_t j = 0; j < ParamTable::kCols; ++j)
            out += " " + format_table_value(ParamTable::scaled_value(which, i, j)) + " |";
        out += '\n';
    }
    return out;
}

} // namespace sgfit

#endif // SGFIT_PARAM_TABLES_HPP
