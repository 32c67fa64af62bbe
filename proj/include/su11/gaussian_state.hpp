#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace su11 {

// Gaussian state of n bosonic modes in the quadrature convention
//   X = a + a^dag,  Y = i(a^dag - a),  so vacuum has Var(X) = Var(Y) = 1.
// Quadratures are interleaved as (X1, Y1, X2, Y2, ...). Every operation below
// takes the state by value and returns the transformed copy.
template <typename Scalar>
struct GaussianState {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Eigen::Index n_modes = 0;
    Vec mean;
    Mat cov;
};

using GaussianStated = GaussianState<double>;

// One term of a linear homodyne combination: weight * X_mode(angle),
// where X(theta) = X cos(theta) + Y sin(theta).
template <typename Scalar>
struct QuadratureCoefficient {
    Eigen::Index mode = 0;
    Scalar angle = 0;
    Scalar weight = 1;
};

using QuadratureCoefficientd = QuadratureCoefficient<double>;

// A linear combination of rotated quadratures across modes; covers a single
// homodyne, joint measurements Y1 + lambda*Y2, and electronic current mixing.
template <typename Scalar>
struct MeasurementSpec {
    std::vector<QuadratureCoefficient<Scalar>> terms;
};

using MeasurementSpecd = MeasurementSpec<double>;

namespace detail {

template <typename Scalar>
void require_mode(const GaussianState<Scalar>& st, Eigen::Index mode) {
    if (mode < 0 || mode >= st.n_modes) throw std::invalid_argument("mode index out of range");
}

}  // namespace detail

template <typename Scalar>
GaussianState<Scalar> vacuum_state(Eigen::Index n_modes) {
    if (n_modes < 1) throw std::invalid_argument("n_modes must be >= 1");
    GaussianState<Scalar> st;
    st.n_modes = n_modes;
    st.mean = GaussianState<Scalar>::Vec::Zero(2 * n_modes);
    st.cov = GaussianState<Scalar>::Mat::Identity(2 * n_modes, 2 * n_modes);
    return st;
}

inline GaussianStated vacuum_stated(Eigen::Index n_modes) { return vacuum_state<double>(n_modes); }

template <typename Scalar>
void symmetrize(GaussianState<Scalar>& st) {
    st.cov = (Scalar(0.5) * (st.cov + st.cov.transpose())).eval();
}

// Symplectic form, block diagonal in [[0, 1], [-1, 0]].
template <typename Scalar>
typename GaussianState<Scalar>::Mat symplectic_form(Eigen::Index n_modes) {
    typename GaussianState<Scalar>::Mat omega =
        GaussianState<Scalar>::Mat::Zero(2 * n_modes, 2 * n_modes);
    for (Eigen::Index m = 0; m < n_modes; ++m) {
        omega(2 * m, 2 * m + 1) = Scalar(1);
        omega(2 * m + 1, 2 * m) = Scalar(-1);
    }
    return omega;
}

// Phase shift a -> a e^{i phi}.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> rotation_symplectic(Scalar phi) {
    Eigen::Matrix<Scalar, 2, 2> s;
    s << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    return s;
}

// Two-mode squeezer a1 -> G a1 + g e^{i phi_p} a2^dag (and 1 <-> 2), with
// G = sqrt(1 + g^2) so G^2 - g^2 = 1 holds exactly.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> squeezer_symplectic(Scalar gain, Scalar pump_phase) {
    if (gain < Scalar(0)) throw std::invalid_argument("squeezer gain must be >= 0");
    const Scalar g = gain;
    const Scalar G = std::sqrt(Scalar(1) + g * g);
    const Scalar c = std::cos(pump_phase);
    const Scalar s = std::sin(pump_phase);
    Eigen::Matrix<Scalar, 4, 4> m;
    m << G, 0, g * c, g * s,
         0, G, g * s, -g * c,
         g * c, g * s, G, 0,
         g * s, -g * c, 0, G;
    return m;
}

// Beam splitter a1 -> sqrt(T) a1 + sqrt(R) a2, a2 -> sqrt(T) a2 - sqrt(R) a1.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> beam_splitter_symplectic(Scalar transmissivity) {
    if (transmissivity < Scalar(0) || transmissivity > Scalar(1))
        throw std::invalid_argument("transmissivity must be in [0, 1]");
    const Scalar t = std::sqrt(transmissivity);
    const Scalar r = std::sqrt(Scalar(1) - transmissivity);
    Eigen::Matrix<Scalar, 4, 4> m;
    m << t, 0, r, 0,
         0, t, 0, r,
         -r, 0, t, 0,
         0, -r, 0, t;
    return m;
}

template <typename Scalar>
GaussianState<Scalar> apply_single_mode(GaussianState<Scalar> st,
                                        const Eigen::Matrix<Scalar, 2, 2>& s, Eigen::Index mode) {
    detail::require_mode(st, mode);
    const std::vector<Eigen::Index> p{2 * mode, 2 * mode + 1};
    typename GaussianState<Scalar>::Vec mp = s * st.mean(p);
    st.mean(p) = mp;
    typename GaussianState<Scalar>::Mat rows = s * st.cov(p, Eigen::all);
    st.cov(p, Eigen::all) = rows;
    typename GaussianState<Scalar>::Mat cols = st.cov(Eigen::all, p) * s.transpose();
    st.cov(Eigen::all, p) = cols;
    symmetrize(st);
    return st;
}

template <typename Scalar>
GaussianState<Scalar> apply_two_mode(GaussianState<Scalar> st,
                                     const Eigen::Matrix<Scalar, 4, 4>& s, Eigen::Index mode1,
                                     Eigen::Index mode2) {
    detail::require_mode(st, mode1);
    detail::require_mode(st, mode2);
    if (mode1 == mode2) throw std::invalid_argument("two-mode element needs distinct modes");
    const std::vector<Eigen::Index> p{2 * mode1, 2 * mode1 + 1, 2 * mode2, 2 * mode2 + 1};
    typename GaussianState<Scalar>::Vec mp = s * st.mean(p);
    st.mean(p) = mp;
    typename GaussianState<Scalar>::Mat rows = s * st.cov(p, Eigen::all);
    st.cov(p, Eigen::all) = rows;
    typename GaussianState<Scalar>::Mat cols = st.cov(Eigen::all, p) * s.transpose();
    st.cov(Eigen::all, p) = cols;
    symmetrize(st);
    return st;
}

template <typename Scalar>
GaussianState<Scalar> displace(GaussianState<Scalar> st, Eigen::Index mode,
                               std::complex<Scalar> alpha) {
    detail::require_mode(st, mode);
    st.mean(2 * mode) += Scalar(2) * alpha.real();
    st.mean(2 * mode + 1) += Scalar(2) * alpha.imag();
    return st;
}

template <typename Scalar>
GaussianState<Scalar> phase_shift(GaussianState<Scalar> st, Eigen::Index mode, Scalar phi) {
    return apply_single_mode(std::move(st), rotation_symplectic(phi), mode);
}

template <typename Scalar>
GaussianState<Scalar> two_mode_squeeze(GaussianState<Scalar> st, Eigen::Index mode1,
                                       Eigen::Index mode2, Scalar gain,
                                       Scalar pump_phase = Scalar(0)) {
    return apply_two_mode(std::move(st), squeezer_symplectic(gain, pump_phase), mode1, mode2);
}

template <typename Scalar>
GaussianState<Scalar> beam_split(GaussianState<Scalar> st, Eigen::Index mode1, Eigen::Index mode2,
                                 Scalar transmissivity) {
    return apply_two_mode(std::move(st), beam_splitter_symplectic(transmissivity), mode1, mode2);
}

// Pure-loss channel: a fraction `loss` of the photons is scattered into an
// unobserved environment mode that starts in vacuum.
template <typename Scalar>
GaussianState<Scalar> attenuate(GaussianState<Scalar> st, Eigen::Index mode, Scalar loss) {
    detail::require_mode(st, mode);
    if (loss < Scalar(0) || loss > Scalar(1))
        throw std::invalid_argument("loss fraction must be in [0, 1]");
    const Scalar eta = std::sqrt(Scalar(1) - loss);
    const Eigen::Index x = 2 * mode;
    st.mean(x) *= eta;
    st.mean(x + 1) *= eta;
    st.cov.middleCols(x, 2) *= eta;
    st.cov.middleRows(x, 2) *= eta;
    st.cov(x, x) += loss;
    st.cov(x + 1, x + 1) += loss;
    symmetrize(st);
    return st;
}

// Mean and variance of M = sum_k w_k X_{m_k}(theta_k).
template <typename Scalar>
std::pair<Scalar, Scalar> homodyne_moments(const GaussianState<Scalar>& st,
                                           const std::vector<QuadratureCoefficient<Scalar>>& terms) {
    if (terms.empty()) throw std::invalid_argument("homodyne_moments needs at least one term");
    typename GaussianState<Scalar>::Vec c = GaussianState<Scalar>::Vec::Zero(2 * st.n_modes);
    for (const auto& t : terms) {
        detail::require_mode(st, t.mode);
        c(2 * t.mode) += t.weight * std::cos(t.angle);
        c(2 * t.mode + 1) += t.weight * std::sin(t.angle);
    }
    const Scalar mean = c.dot(st.mean);
    const Scalar var = c.dot(st.cov * c);
    return {mean, var};
}

template <typename Scalar>
std::pair<Scalar, Scalar> homodyne_moments(const GaussianState<Scalar>& st,
                                           const MeasurementSpec<Scalar>& spec) {
    return homodyne_moments(st, spec.terms);
}

template <typename Scalar>
Scalar mean_photon(const GaussianState<Scalar>& st, Eigen::Index mode) {
    detail::require_mode(st, mode);
    const Eigen::Index x = 2 * mode;
    const Scalar m2 = st.mean(x) * st.mean(x) + st.mean(x + 1) * st.mean(x + 1);
    return (m2 + st.cov(x, x) + st.cov(x + 1, x + 1) - Scalar(2)) / Scalar(4);
}

template <typename Scalar>
Scalar mean_photon(const GaussianState<Scalar>& st) {
    Scalar total = 0;
    for (Eigen::Index m = 0; m < st.n_modes; ++m) total += mean_photon(st, m);
    return total;
}

// Symplectic spectrum of the covariance matrix: the N moduli of the (pure
// imaginary) eigenvalues of Omega * cov, sorted ascending. A physical state
// has every value >= 1; a pure state has all values == 1.
template <typename Scalar>
typename GaussianState<Scalar>::Vec symplectic_eigenvalues(const GaussianState<Scalar>& st) {
    using Mat = typename GaussianState<Scalar>::Mat;
    const Mat m = symplectic_form<Scalar>(st.n_modes) * st.cov;
    Eigen::EigenSolver<Mat> es(m, false);
    std::vector<Scalar> nu(static_cast<std::size_t>(2 * st.n_modes));
    for (Eigen::Index i = 0; i < 2 * st.n_modes; ++i)
        nu[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()(i).imag());
    std::sort(nu.begin(), nu.end());
    typename GaussianState<Scalar>::Vec out(st.n_modes);
    for (Eigen::Index i = 0; i < st.n_modes; ++i) out(i) = nu[static_cast<std::size_t>(2 * i)];
    return out;
}

template <typename Scalar>
bool is_physical(const GaussianState<Scalar>& st, Scalar tol = Scalar(1e-9)) {
    const auto nu = symplectic_eigenvalues(st);
    return (nu.array() >= Scalar(1) - tol).all();
}

}  // namespace su11
