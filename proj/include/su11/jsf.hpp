#pragma once

// Joint spectral function (JSF) engineering for single- and multi-stage
// parametric pair sources. The two-photon amplitude over signal/idler offset
// frequencies is sampled on a rectangular grid; cascading stages multiplies
// it by the coherent sum of stage gains with a dispersive pair phase per gap.
// Everything here assumes the low-gain (perturbative pair-production) regime.
//
// Frequencies are in pump-bandwidth-normalized units by default; all shape
// statements are unit-free. The overall amplitude normalization is fixed on
// the sampled grid (sum |F|^2 dOs dOi = 1).

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace su11 {

struct JSFGrid {
    std::vector<double> omega_s;
    std::vector<double> omega_i;
    Eigen::MatrixXcd amp;  // rows follow omega_s, columns follow omega_i
    double norm = 0.0;

    double step_s() const { return omega_s[1] - omega_s[0]; }
    double step_i() const { return omega_i[1] - omega_i[0]; }

    double compute_norm() const {
        return amp.squaredNorm() * step_s() * step_i();
    }

    void normalize() {
        const double n = compute_norm();
        if (!(n > 0.0)) throw std::invalid_argument("cannot normalize a vanishing JSF");
        amp /= std::sqrt(n);
        norm = 1.0;
    }
};

// Phase-matching models: Broadband treats the medium as much wider-band than
// the pump (sinc factor = 1); LinearMismatch uses dk = slope_s*Os + slope_i*Oi
// over a medium of the given length.
struct Broadband {
    friend bool operator==(const Broadband&, const Broadband&) = default;
};
struct LinearMismatch {
    double slope_s = 0.0;
    double slope_i = 0.0;
    double length = 1.0;
    friend bool operator==(const LinearMismatch&, const LinearMismatch&) = default;
};
using MismatchModel = std::variant<Broadband, LinearMismatch>;

struct StageSpec {
    std::vector<double> gains;
    double beta = 0.0;
    double l_dm = 0.0;
    double sigma_p = 1.0;
};

struct MultistageResult {
    JSFGrid grid;
    double rate_enhancement = 1.0;  // pair rate relative to the first stage alone
};

struct SchmidtResult {
    double schmidt_number = 1.0;
    std::vector<double> weights;  // leading normalized mode weights, descending
};

inline double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

namespace detail {

inline void require_axis(const std::vector<double>& axis, const char* name) {
    if (axis.size() < 2)
        throw std::invalid_argument(std::string(name) + " axis needs at least two points");
    if (!(axis[1] > axis[0]))
        throw std::invalid_argument(std::string(name) + " axis must be increasing");
}

inline void require_normalized(const JSFGrid& jsf, const char* op) {
    if (std::abs(jsf.norm - 1.0) > 1e-6)
        throw std::invalid_argument(std::string(op) + " expects a normalized grid");
}

inline double mismatch_factor(const MismatchModel& model, double os, double oi) {
    if (const auto* lin = std::get_if<LinearMismatch>(&model)) {
        const double dk = lin->slope_s * os + lin->slope_i * oi;
        return sinc(0.5 * dk * lin->length);
    }
    return 1.0;
}

}  // namespace detail

// Single-stage JSF: pump envelope exp(-(Os+Oi)^2 / (2 sigma_p^2)) times the
// phase-matching factor, normalized on the grid. Energy conservation makes
// the amplitude ride along the -45 degree anti-diagonal.
inline JSFGrid jsf_single(std::vector<double> omega_s, std::vector<double> omega_i,
                          double sigma_p, const MismatchModel& model = Broadband{}) {
    if (!(sigma_p > 0.0)) throw std::invalid_argument("pump bandwidth must be positive");
    detail::require_axis(omega_s, "omega_s");
    detail::require_axis(omega_i, "omega_i");
    JSFGrid jsf;
    jsf.omega_s = std::move(omega_s);
    jsf.omega_i = std::move(omega_i);
    const Eigen::Index rows = static_cast<Eigen::Index>(jsf.omega_s.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(jsf.omega_i.size());
    jsf.amp.resize(rows, cols);
    const double inv = 1.0 / (2.0 * sigma_p * sigma_p);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double os = jsf.omega_s[r], oi = jsf.omega_i[c];
            const double sum = os + oi;
            jsf.amp(r, c) = std::exp(-sum * sum * inv) * detail::mismatch_factor(model, os, oi);
        }
    }
    jsf.normalize();
    return jsf;
}

// Coherent sum of stage amplitude gains with pair phase theta per gap,
// g_T = sum_k g_k exp(i (N-k) theta). For equal gains its modulus is the
// multi-path interference factor g |sin(N theta/2) / sin(theta/2)|.
inline std::complex<double> stage_gain_total(double theta, const std::vector<double>& gains) {
    if (gains.empty()) throw std::invalid_argument("stage_gain_total needs at least one gain");
    std::complex<double> total = 0.0;
    const int n = static_cast<int>(gains.size());
    for (int k = 0; k < n; ++k)
        total += gains[static_cast<std::size_t>(k)] *
                 std::exp(std::complex<double>(0.0, (n - 1 - k) * theta));
    return total;
}

// Pair phase collected in one dispersive gap, quadratic in the signal-idler
// frequency split.
inline double dispersion_phase(double omega_s, double omega_i, double beta, double l_dm) {
    const double split = omega_s - omega_i;
    return beta * split * split * l_dm;
}

inline std::vector<std::string> stage_warnings(const StageSpec& spec) {
    std::vector<std::string> warnings;
    for (double g : spec.gains)
        if (g > 0.3) {
            warnings.push_back(
                "stage gain exceeds 0.3; the low-gain cascade model degrades");
            break;
        }
    return warnings;
}

// Multi-stage JSF: the single-stage amplitude modulated point-wise by
// g_T(theta)/g_1 with theta the dispersive pair phase at that grid point.
// rate_enhancement is the pair rate relative to the first stage alone; it
// equals N^2 for N equal gains without dispersion.
inline MultistageResult jsf_multistage(std::vector<double> omega_s, std::vector<double> omega_i,
                                       const StageSpec& spec,
                                       const MismatchModel& model = Broadband{}) {
    if (spec.gains.empty()) throw std::invalid_argument("stage spec needs at least one gain");
    for (double g : spec.gains)
        if (!(g >= 0.0)) throw std::invalid_argument("stage gains must be non-negative");
    if (!(spec.gains.front() > 0.0))
        throw std::invalid_argument("the reference (first) stage gain must be positive");

    MultistageResult result;
    result.grid = jsf_single(std::move(omega_s), std::move(omega_i), spec.sigma_p, model);
    const double g_ref = spec.gains.front();
    for (Eigen::Index r = 0; r < result.grid.amp.rows(); ++r) {
        for (Eigen::Index c = 0; c < result.grid.amp.cols(); ++c) {
            const double theta = dispersion_phase(result.grid.omega_s[r],
                                                  result.grid.omega_i[c], spec.beta, spec.l_dm);
            result.grid.amp(r, c) *= stage_gain_total(theta, spec.gains) / g_ref;
        }
    }
    result.rate_enhancement = result.grid.compute_norm();
    result.grid.normalize();
    return result;
}

// Stage lengths (equivalently low-gain stage gains) following the binomial
// profile L_k = L_1 C(N-1, k-1); it apodizes the stage interference to
// |g_T| = g_1 (2 cos(theta/2))^(N-1), free of secondary maxima.
inline std::vector<double> binomial_lengths(int n, double l1) {
    if (n < 1) throw std::invalid_argument("need at least one stage");
    if (!(l1 > 0.0)) throw std::invalid_argument("base length must be positive");
    std::vector<double> lengths;
    lengths.reserve(static_cast<std::size_t>(n));
    double coeff = 1.0;
    for (int k = 1; k <= n; ++k) {
        lengths.push_back(l1 * coeff);
        coeff = coeff * (n - k) / k;
    }
    return lengths;
}

// Signal-frequency marginal of |F|^2; integrates to 1 on a normalized grid.
inline std::vector<double> marginal_intensity(const JSFGrid& jsf) {
    if (jsf.amp.size() == 0) throw std::invalid_argument("marginal of an empty grid");
    detail::require_normalized(jsf, "marginal_intensity");
    std::vector<double> marginal(static_cast<std::size_t>(jsf.amp.rows()));
    for (Eigen::Index r = 0; r < jsf.amp.rows(); ++r)
        marginal[static_cast<std::size_t>(r)] = jsf.amp.row(r).squaredNorm() * jsf.step_i();
    return marginal;
}

// Schmidt decomposition of the sampled amplitude. The mode weights are the
// normalized squared singular values of amp * sqrt(dOs dOi); the Schmidt
// number K = 1 / sum(weight^2) counts effective pair modes (1 = factorable).
inline SchmidtResult schmidt_analysis(const JSFGrid& jsf) {
    detail::require_normalized(jsf, "schmidt_analysis");
    const Eigen::MatrixXcd m = jsf.amp * std::sqrt(jsf.step_s() * jsf.step_i());
    const Eigen::MatrixXcd gram = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    Eigen::VectorXd w = eig.eigenvalues().cwiseMax(0.0);
    const double total = w.sum();
    if (!(total > 0.0)) throw std::invalid_argument("degenerate JSF");
    w /= total;

    SchmidtResult result;
    result.schmidt_number = 1.0 / w.array().square().sum();
    const Eigen::Index keep = std::min<Eigen::Index>(16, w.size());
    result.weights.reserve(static_cast<std::size_t>(keep));
    for (Eigen::Index k = 0; k < keep; ++k)
        result.weights.push_back(w(w.size() - 1 - k));  // eigenvalues come ascending
    return result;
}

// Spectral filtering: keep the amplitude inside the rectangle
// [s_min, s_max] x [i_min, i_max], discard the rest, renormalize.
inline JSFGrid filter_box(const JSFGrid& jsf, double s_min, double s_max, double i_min,
                          double i_max) {
    JSFGrid out = jsf;
    bool any = false;
    for (Eigen::Index r = 0; r < out.amp.rows(); ++r) {
        const bool s_in = jsf.omega_s[static_cast<std::size_t>(r)] >= s_min &&
                          jsf.omega_s[static_cast<std::size_t>(r)] <= s_max;
        for (Eigen::Index c = 0; c < out.amp.cols(); ++c) {
            const bool i_in = jsf.omega_i[static_cast<std::size_t>(c)] >= i_min &&
                              jsf.omega_i[static_cast<std::size_t>(c)] <= i_max;
            if (s_in && i_in)
                any = true;
            else
                out.amp(r, c) = 0.0;
        }
    }
    if (!any) throw std::invalid_argument("filter box misses the grid entirely");
    out.normalize();
    return out;
}

inline std::vector<double> linear_axis(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) throw std::invalid_argument("axis needs n >= 2 and hi > lo");
    std::vector<double> axis(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) axis[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
    return axis;
}

}  // namespace su11
