#pragma once

// Measurement extraction on top of circuits: fringes, small-signal responses,
// SNR reports, loss curves, resource sharing, information tapping and
// entanglement witnesses.
//
// Builders encode the operating point. A CircuitBuilder maps one scalar (the
// modulation depth, or the fringe phase for fringe_scan) to a full circuit;
// SNR routines probe it with a symmetric difference around zero so that
// quadratic fringe curvature cancels from the extracted signal.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "su11/circuit.hpp"
#include "su11/gaussian_state.hpp"

namespace su11 {

using CircuitBuilder = std::function<Circuit(double)>;
using LossyCircuitBuilder = std::function<Circuit(double, double)>;

struct SnrReport {
    std::string scheme;
    double signal_power = 0.0;
    double noise_power = 0.0;
    double snr = 0.0;
    double snr_db = 0.0;
    double i_ps = 0.0;
    double snl_ratio = 0.0;
};

struct FringePoint {
    double phase = 0.0;
    double i1 = 0.0;
    double i2 = 0.0;
    double var1 = 0.0;
    double var2 = 0.0;
};

enum class LossSite { Internal, External };

struct LossPoint {
    double loss = 0.0;
    SnrReport report;
};

struct ResourceSharingReport {
    double snr_phase = 0.0;
    double snr_amplitude = 0.0;
    double sum = 0.0;
    double snr_op = 0.0;
};

struct TappingReport {
    double t1 = 0.0;
    double t2 = 0.0;
    double sum = 0.0;
    double snr_in = 0.0;
};

struct InseparabilityReport {
    double k = 0.0;
    double i_direct = 0.0;
    double i_amp = 0.0;
    double i_amp_jm = 0.0;
    double lambda_used = 0.0;
};

// Joint homodyne combination Y(port a) - lambda * Y(port b); with lambda = 1
// this is the noise-cancelling readout of the two-amplifier interferometer.
inline MeasurementSpecd jm_measurement(Eigen::Index port_a, Eigen::Index port_b,
                                       double lambda = 1.0) {
    return {{{port_a, M_PI / 2.0, 1.0}, {port_b, -M_PI / 2.0, lambda}}};
}

// Linearized direct-detection measurement: photocurrent fluctuations of a
// beam with mean amplitude A are |A| times the quadrature along arg(A), so a
// detector is modelled by the term {mode, arg<a>, |<a>|}. Means and variances
// of the resulting spec reproduce photocurrent statistics to first order in
// the fluctuations.
inline MeasurementSpecd intensity_spec(const GaussianStated& ref, Eigen::Index mode) {
    detail::require_mode(ref, mode);
    const double x = ref.mean(2 * mode), y = ref.mean(2 * mode + 1);
    return {{{mode, std::atan2(y, x), 0.5 * std::hypot(x, y)}}};
}

inline MeasurementSpecd balanced_detection_spec(const GaussianStated& ref, Eigen::Index mode1,
                                                Eigen::Index mode2) {
    auto plus = intensity_spec(ref, mode1).terms.front();
    auto minus = intensity_spec(ref, mode2).terms.front();
    minus.weight = -minus.weight;
    return {{plus, minus}};
}

inline std::vector<FringePoint> fringe_scan(const CircuitBuilder& builder_over_phase,
                                            const std::vector<double>& phase_grid,
                                            double theta = M_PI / 2.0) {
    if (phase_grid.empty()) throw std::invalid_argument("fringe_scan needs a non-empty grid");
    std::vector<FringePoint> table;
    table.reserve(phase_grid.size());
    for (double phi : phase_grid) {
        GaussianStated st = run(builder_over_phase(phi));
        FringePoint pt;
        pt.phase = phi;
        pt.i1 = mean_photon(st, 0);
        pt.var1 = homodyne_moments(st, MeasurementSpecd{{{0, theta, 1.0}}}).second;
        if (st.n_modes > 1) {
            pt.i2 = mean_photon(st, 1);
            pt.var2 = homodyne_moments(st, MeasurementSpecd{{{1, theta, 1.0}}}).second;
        }
        table.push_back(pt);
    }
    return table;
}

inline double small_signal_response(const CircuitBuilder& builder, const MeasurementSpecd& m,
                                    double delta) {
    if (!(delta >= 0.0 && delta <= 0.05))
        throw std::invalid_argument("modulation depth must lie in [0, 0.05]");
    if (delta == 0.0) return 0.0;
    const double on = homodyne_moments(run(builder(delta)), m).first;
    const double off = homodyne_moments(run(builder(0.0)), m).first;
    return on - off;
}

// Photon number of the seed field at the point where the signal is imprinted:
// the circuits at modulation 0 and at the probe value are compared element by
// element, and the coherent photon number of each differing element's modes
// is read off just before that element acts. Spontaneous photons are
// excluded, matching the convention that only the seeded beam "probes".
inline double sensing_photons(const CircuitBuilder& builder, double probe) {
    const Circuit base = builder(0.0);
    const Circuit mod = builder(probe);
    if (base.n_modes != mod.n_modes || base.elements.size() != mod.elements.size())
        throw std::invalid_argument("signal must only modulate element parameters");
    if (base == mod) throw std::invalid_argument("builder does not respond to the signal");
    double photons = 0.0;
    GaussianStated st = vacuum_stated(base.n_modes);
    for (std::size_t i = 0; i < base.elements.size(); ++i) {
        if (!(base.elements[i] == mod.elements[i])) {
            for (Eigen::Index m : base.elements[i].modes) {
                const double x = st.mean(2 * m), y = st.mean(2 * m + 1);
                photons += 0.25 * (x * x + y * y);
            }
        }
        st = apply_element(std::move(st), base.elements[i]);
    }
    return photons;
}

inline SnrReport snr(const CircuitBuilder& builder, const MeasurementSpecd& m, double delta,
                     std::string scheme_tag = {}) {
    if (!(delta > 0.0 && delta <= 0.05))
        throw std::invalid_argument("modulation depth must lie in (0, 0.05]");
    const double up = homodyne_moments(run(builder(0.5 * delta)), m).first;
    const double down = homodyne_moments(run(builder(-0.5 * delta)), m).first;
    const double signal = up - down;
    const double noise = homodyne_moments(run(builder(0.0)), m).second;
    if (!(noise > 0.0)) throw std::runtime_error("degenerate measurement variance");
    SnrReport rep;
    rep.scheme = std::move(scheme_tag);
    rep.signal_power = signal * signal;
    rep.noise_power = noise;
    rep.snr = rep.signal_power / noise;
    rep.snr_db = 10.0 * std::log10(rep.snr);
    rep.i_ps = sensing_photons(builder, delta);
    const double shot = 4.0 * rep.i_ps * delta * delta;
    rep.snl_ratio = shot > 0.0 ? rep.snr / shot : 0.0;
    return rep;
}

inline std::vector<LossPoint> snr_vs_loss(const LossyCircuitBuilder& builder,
                                          const MeasurementSpecd& m, double delta,
                                          const std::vector<double>& loss_grid, LossSite site) {
    std::vector<LossPoint> table;
    table.reserve(loss_grid.size());
    const std::string tag = site == LossSite::Internal ? "internal_loss" : "external_loss";
    for (double loss : loss_grid) {
        if (!(loss >= 0.0 && loss <= 1.0))
            throw std::invalid_argument("loss fraction must lie in [0, 1]");
        CircuitBuilder at_loss = [&builder, loss](double d) { return builder(d, loss); };
        table.push_back({loss, snr(at_loss, m, delta, tag)});
    }
    return table;
}

// Simultaneous phase and amplitude estimation: the phase modulation is read
// with Y at port 1 and an equal amplitude modulation with X at port 2. Their
// SNRs sum to the single-signal joint optimum snr_op = 4 (G1+g1)^2 i_ps d^2
// in the large-g2 limit, for both the single-seed and dual-seed variants.
inline ResourceSharingReport resource_sharing_report(double g1, double g2, double alpha,
                                                     double delta, bool dual_beam = false) {
    SuiParams base;
    base.g1 = g1;
    base.g2 = g2;
    base.alpha = alpha;
    base.phi1 = 0.0;
    base.phi2 = M_PI;
    base.dual_beam = dual_beam;
    CircuitBuilder phase_builder = [base](double d) {
        SuiParams p = base;
        p.delta = d;
        return preset_sui(p);
    };
    CircuitBuilder amp_builder = [base](double e) {
        SuiParams p = base;
        p.epsilon = e;
        return preset_sui(p);
    };
    ResourceSharingReport rep;
    rep.snr_phase = snr(phase_builder, MeasurementSpecd{{{0, M_PI / 2.0, 1.0}}}, delta).snr;
    rep.snr_amplitude = snr(amp_builder, MeasurementSpecd{{{1, 0.0, 1.0}}}, delta).snr;
    rep.sum = rep.snr_phase + rep.snr_amplitude;
    const double big1 = std::sqrt(1.0 + g1 * g1);
    const double u = big1 + g1;
    const double i_ps =
        (dual_beam ? big1 * big1 + g1 * g1 : g1 * g1) * alpha * alpha;
    rep.snr_op = 4.0 * u * u * i_ps * delta * delta;
    return rep;
}

// Information tapping: the interferometer output SNRs at both ports, each
// ratioed to the direct-measurement SNR of the phase-sensing beam before the
// second amplifier. t1 + t2 -> 2 as g2 grows, beating the classical t1+t2 <= 1
// tapping bound.
inline TappingReport tapping_coefficients(double g1, double g2, double alpha, double delta) {
    SuiParams base;
    base.g1 = g1;
    base.g2 = g2;
    base.alpha = alpha;
    base.phi1 = 0.0;
    base.phi2 = M_PI;
    CircuitBuilder out_builder = [base](double d) {
        SuiParams p = base;
        p.delta = d;
        return preset_sui(p);
    };
    const double out1 = snr(out_builder, MeasurementSpecd{{{0, M_PI / 2.0, 1.0}}}, delta).snr;
    const double out2 = snr(out_builder, MeasurementSpecd{{{1, M_PI / 2.0, 1.0}}}, delta).snr;

    auto [trunk, trunk_m] = preset_truncated(g1, alpha, 1.0);
    CircuitBuilder in_builder = [trunk](double d) {
        Circuit c = trunk;
        c.elements.push_back(make_phase_shifter(1, d));
        return c;
    };
    TappingReport rep;
    rep.snr_in = snr(in_builder, trunk_m, delta).snr;
    rep.t1 = out1 / rep.snr_in;
    rep.t2 = out2 / rep.snr_in;
    rep.sum = rep.t1 + rep.t2;
    return rep;
}

namespace detail {

// [Var(X1 - k X2) + Var(Y1 + k Y2)] / (2 (1 + k^2)) without the public range
// restriction on k.
inline double inseparability_combo(const GaussianStated& st, Eigen::Index m1, Eigen::Index m2,
                                   double k) {
    const double vx =
        homodyne_moments(st, MeasurementSpecd{{{m1, 0.0, 1.0}, {m2, 0.0, -k}}}).second;
    const double vy =
        homodyne_moments(st, MeasurementSpecd{{{m1, M_PI / 2.0, 1.0}, {m2, M_PI / 2.0, k}}})
            .second;
    return (vx + vy) / (2.0 * (1.0 + k * k));
}

}  // namespace detail

// Two-mode inseparability witness; values below 1 certify entanglement.
inline double inseparability_direct(const GaussianStated& st, Eigen::Index m1, Eigen::Index m2,
                                    double k) {
    if (!(k > 0.0 && k <= 1.0)) throw std::invalid_argument("gain ratio k must lie in (0, 1]");
    detail::require_mode(st, m1);
    detail::require_mode(st, m2);
    return detail::inseparability_combo(st, m1, m2, k);
}

// Measures the witness through a parametric amplifier instead of two homodyne
// detectors. The analyzer is pumped half a cycle out of phase with the
// source, so its outputs carry X1 - (g/G) X2 and Y1 + (g/G) Y2 amplified. A
// joint readout with electronic weight lambda probes the ratio
// k = (g + lambda G) / (G + lambda g); lambda = 1 gives k = 1 at any analyzer
// gain. Both the single-port and joint variances are normalized to a
// blocked-input (vacuum) run through the same analyzer and detection loss.
inline InseparabilityReport inseparability_via_amplifier(double source_g, double analyzer_g,
                                                         double detection_loss, double lambda) {
    if (source_g < 0.0 || analyzer_g < 0.0)
        throw std::invalid_argument("amplifier gains must be non-negative");
    if (!(detection_loss >= 0.0 && detection_loss < 1.0))
        throw std::invalid_argument("detection loss must lie in [0, 1)");
    const double big_a = std::sqrt(1.0 + analyzer_g * analyzer_g);
    const double denom = big_a + lambda * analyzer_g;
    if (std::abs(denom) < 1e-12)
        throw std::invalid_argument("electronic weight cancels the analyzer output");

    InseparabilityReport rep;
    rep.lambda_used = lambda;
    rep.k = (analyzer_g + lambda * big_a) / denom;

    Circuit source{2, {make_squeezer(0, 1, source_g, 0.0)}};
    rep.i_direct = detail::inseparability_combo(run(source), 0, 1, rep.k);

    Circuit analyzed = source;
    analyzed.elements.push_back(make_squeezer(0, 1, analyzer_g, M_PI));
    analyzed.elements.push_back(make_loss(0, detection_loss));
    analyzed.elements.push_back(make_loss(1, detection_loss));
    Circuit blocked{2, {analyzed.elements.begin() + 1, analyzed.elements.end()}};

    const GaussianStated out = run(analyzed);
    const GaussianStated ref = run(blocked);

    auto port_power = [](const GaussianStated& st) {
        return homodyne_moments(st, MeasurementSpecd{{{0, 0.0, 1.0}}}).second +
               homodyne_moments(st, MeasurementSpecd{{{0, M_PI / 2.0, 1.0}}}).second;
    };
    rep.i_amp = port_power(out) / port_power(ref);

    auto joint_power = [lambda](const GaussianStated& st) {
        const MeasurementSpecd mx{{{0, 0.0, 1.0}, {1, 0.0, -lambda}}};
        const MeasurementSpecd my{{{0, M_PI / 2.0, 1.0}, {1, M_PI / 2.0, lambda}}};
        return homodyne_moments(st, mx).second + homodyne_moments(st, my).second;
    };
    rep.i_amp_jm = joint_power(out) / joint_power(ref);
    return rep;
}

}  // namespace su11
