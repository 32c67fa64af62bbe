#pragma once

// Brute-force Fock-basis simulator used as an independent oracle in the test
// suite. States are dense vectors over a truncated product Hilbert space and
// every element is applied as exp(K) v via a scaled Taylor series, so the only
// approximations are the photon-number cutoff and the series tolerance.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include <cassert>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "su11/gaussian_state.hpp"

namespace fock {

using Cplx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<Cplx>;
using VecC = Eigen::VectorXcd;

inline SpMat annihilation(int dim) {
    SpMat a(dim, dim);
    std::vector<Eigen::Triplet<Cplx>> trip;
    for (int n = 1; n < dim; ++n) trip.emplace_back(n - 1, n, std::sqrt(double(n)));
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

inline SpMat sparse_identity(int dim) {
    SpMat id(dim, dim);
    id.setIdentity();
    return id;
}

class FockSim {
  public:
    explicit FockSim(std::vector<int> dims) : dims_(std::move(dims)) {
        int total = 1;
        for (int d : dims_) total *= d;
        dim_ = total;
        psi_ = VecC::Zero(dim_);
        psi_(0) = 1.0;
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            SpMat op = sparse_identity(1);
            for (std::size_t j = 0; j < dims_.size(); ++j) {
                const SpMat factor = (j == k) ? annihilation(dims_[j]) : sparse_identity(dims_[j]);
                op = Eigen::kroneckerProduct(op, factor).eval();
            }
            a_ops_.push_back(op);
        }
    }

    int n_modes() const { return static_cast<int>(dims_.size()); }
    double norm() const { return psi_.norm(); }

    void displace(int mode, Cplx alpha) {
        const SpMat& a = a_ops_[check(mode)];
        apply_exp(SpMat(alpha * SpMat(a.adjoint()) - std::conj(alpha) * a));
    }

    void phase_shift(int mode, double phi) {
        check(mode);
        // exp(i phi n) is diagonal in the product basis.
        int stride = 1;
        for (int j = n_modes() - 1; j > mode; --j) stride *= dims_[j];
        for (int idx = 0; idx < dim_; ++idx) {
            const int n = (idx / stride) % dims_[mode];
            psi_(idx) *= std::polar(1.0, phi * n);
        }
    }

    void two_mode_squeeze(int m1, int m2, double gain, double pump_phase = 0.0) {
        const SpMat& a1 = a_ops_[check(m1)];
        const SpMat& a2 = a_ops_[check(m2)];
        const Cplx eta = std::asinh(gain) * std::polar(1.0, pump_phase);
        const SpMat pair = SpMat(SpMat(a1.adjoint()) * SpMat(a2.adjoint()));
        apply_exp(SpMat(eta * pair - std::conj(eta) * SpMat(a1 * a2)));
    }

    void beam_split(int m1, int m2, double transmissivity) {
        const SpMat& a1 = a_ops_[check(m1)];
        const SpMat& a2 = a_ops_[check(m2)];
        const double theta = std::acos(std::sqrt(transmissivity));
        apply_exp(SpMat(theta * (SpMat(SpMat(a1.adjoint()) * a2) - SpMat(SpMat(a2.adjoint()) * a1))));
    }

    // Routes a fraction `loss` of mode `mode` into a vacuum ancilla. Moments
    // taken over the remaining modes then realize the lossy channel exactly.
    void loss_into(int mode, int ancilla, double loss) {
        beam_split(mode, ancilla, 1.0 - loss);
    }

    Cplx expect_a(int mode) const {
        const SpMat& a = a_ops_[mode];
        return psi_.dot(a * psi_);
    }

    double mean_photon(int mode) const { return (a_ops_[mode] * psi_).squaredNorm(); }

    // Gaussian moments (mean and symmetrized covariance) of the listed modes,
    // in the same quadrature convention as su11::GaussianState.
    su11::GaussianStated moments(const std::vector<int>& modes) const {
        const int k = static_cast<int>(modes.size());
        std::vector<VecC> qpsi(static_cast<std::size_t>(2 * k));
        su11::GaussianStated st;
        st.n_modes = k;
        st.mean = Eigen::VectorXd::Zero(2 * k);
        st.cov = Eigen::MatrixXd::Zero(2 * k, 2 * k);
        const Cplx i_unit(0.0, 1.0);
        for (int j = 0; j < k; ++j) {
            const SpMat& a = a_ops_[modes[static_cast<std::size_t>(j)]];
            qpsi[static_cast<std::size_t>(2 * j)] = a * psi_ + SpMat(a.adjoint()) * psi_;
            qpsi[static_cast<std::size_t>(2 * j + 1)] =
                i_unit * (SpMat(a.adjoint()) * psi_ - a * psi_);
        }
        for (int r = 0; r < 2 * k; ++r) st.mean(r) = psi_.dot(qpsi[static_cast<std::size_t>(r)]).real();
        for (int r = 0; r < 2 * k; ++r)
            for (int c = 0; c < 2 * k; ++c)
                st.cov(r, c) = qpsi[static_cast<std::size_t>(r)].dot(qpsi[static_cast<std::size_t>(c)]).real() -
                               st.mean(r) * st.mean(c);
        st.cov = (0.5 * (st.cov + st.cov.transpose())).eval();
        return st;
    }

  private:
    int check(int mode) const {
        if (mode < 0 || mode >= n_modes()) throw std::out_of_range("fock mode index");
        return mode;
    }

    // psi <- exp(k) psi by s-fold scaling and a Taylor series per segment.
    void apply_exp(const SpMat& k) {
        double one_norm = 0.0;
        for (int j = 0; j < k.outerSize(); ++j) {
            double col = 0.0;
            for (SpMat::InnerIterator it(k, j); it; ++it) col += std::abs(it.value());
            one_norm = std::max(one_norm, col);
        }
        const int segments = std::max(1, static_cast<int>(std::ceil(one_norm)));
        for (int s = 0; s < segments; ++s) {
            VecC term = psi_;
            VecC acc = psi_;
            for (int n = 1; n <= 300; ++n) {
                term = (k * term) / (double(n) * segments);
                acc += term;
                if (term.norm() <= 1e-16 * acc.norm()) break;
            }
            psi_ = acc;
        }
    }

    std::vector<int> dims_;
    int dim_ = 0;
    VecC psi_;
    std::vector<SpMat> a_ops_;
};

}  // namespace fock
