#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "su11/gaussian_state.hpp"

namespace su11 {

// Optical-network primitives. A two-mode squeezer is the parametric amplifier
// a1 -> G a1 + g e^{i phi_p} a2^dag with G = sqrt(1 + g^2).
struct Squeezer {
    double gain = 0.0;
    double pump_phase = 0.0;
    friend bool operator==(const Squeezer&, const Squeezer&) = default;
};

struct BeamSplitter {
    double transmissivity = 1.0;
    friend bool operator==(const BeamSplitter&, const BeamSplitter&) = default;
};

struct PhaseShifter {
    double phase = 0.0;
    friend bool operator==(const PhaseShifter&, const PhaseShifter&) = default;
};

struct Loss {
    double fraction = 0.0;
    friend bool operator==(const Loss&, const Loss&) = default;
};

struct Displace {
    std::complex<double> alpha;
    friend bool operator==(const Displace&, const Displace&) = default;
};

using ElementKind = std::variant<Squeezer, BeamSplitter, PhaseShifter, Loss, Displace>;

struct Element {
    ElementKind kind;
    std::vector<Eigen::Index> modes;
    friend bool operator==(const Element&, const Element&) = default;
};

struct Circuit {
    Eigen::Index n_modes = 0;
    std::vector<Element> elements;
    friend bool operator==(const Circuit&, const Circuit&) = default;
};

inline Element make_squeezer(Eigen::Index m1, Eigen::Index m2, double gain,
                             double pump_phase = 0.0) {
    return Element{Squeezer{gain, pump_phase}, {m1, m2}};
}

inline Element make_beam_splitter(Eigen::Index m1, Eigen::Index m2, double transmissivity) {
    return Element{BeamSplitter{transmissivity}, {m1, m2}};
}

inline Element make_phase_shifter(Eigen::Index mode, double phase) {
    return Element{PhaseShifter{phase}, {mode}};
}

inline Element make_loss(Eigen::Index mode, double fraction) {
    return Element{Loss{fraction}, {mode}};
}

inline Element make_displace(Eigen::Index mode, std::complex<double> alpha) {
    return Element{Displace{alpha}, {mode}};
}

namespace detail {

inline void require_arity(const Element& e, std::size_t want) {
    if (e.modes.size() != want) throw std::invalid_argument("element arity does not match kind");
}

}  // namespace detail

inline GaussianStated apply_element(GaussianStated st, const Element& e) {
    struct Visitor {
        GaussianStated st;
        const Element& e;
        GaussianStated operator()(const Squeezer& s) {
            detail::require_arity(e, 2);
            return two_mode_squeeze(std::move(st), e.modes[0], e.modes[1], s.gain, s.pump_phase);
        }
        GaussianStated operator()(const BeamSplitter& b) {
            detail::require_arity(e, 2);
            return beam_split(std::move(st), e.modes[0], e.modes[1], b.transmissivity);
        }
        GaussianStated operator()(const PhaseShifter& p) {
            detail::require_arity(e, 1);
            return phase_shift(std::move(st), e.modes[0], p.phase);
        }
        GaussianStated operator()(const Loss& l) {
            detail::require_arity(e, 1);
            return attenuate(std::move(st), e.modes[0], l.fraction);
        }
        GaussianStated operator()(const Displace& d) {
            detail::require_arity(e, 1);
            return displace(std::move(st), e.modes[0], d.alpha);
        }
    };
    return std::visit(Visitor{std::move(st), e}, e.kind);
}

inline GaussianStated run(const Circuit& c, GaussianStated input) {
    if (input.n_modes != c.n_modes)
        throw std::invalid_argument("input state mode count does not match circuit");
    for (const auto& e : c.elements) input = apply_element(std::move(input), e);
    return input;
}

inline GaussianStated run(const Circuit& c) { return run(c, vacuum_stated(c.n_modes)); }

// Parameters of the two-amplifier interferometer. The fringe depends on the
// phase sum phi1 + phi2; the dark fringe sits at phi1 + phi2 = pi. delta is a
// small phase signal on the probe arm (both arms when dual_beam), epsilon a
// small amplitude-modulation signal realized as a displacement along the arm
// amplitude.
struct SuiParams {
    double g1 = 0.75;
    double g2 = 0.75;
    std::complex<double> alpha = 10.0;
    double phi1 = 0.0;
    double phi2 = M_PI;
    double internal_loss = 0.0;
    double external_loss = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    bool dual_beam = false;
    friend bool operator==(const SuiParams&, const SuiParams&) = default;
};

namespace detail {

inline void require_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument(std::string(what) + " must be in [0, 1]");
}

inline void require_nonnegative(double x, const char* what) {
    if (!(x >= 0.0)) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

}  // namespace detail

inline std::vector<std::string> validate(const SuiParams& p) {
    std::vector<std::string> warnings;
    if (std::abs(p.delta) > 0.05)
        warnings.push_back("delta exceeds 0.05; small-signal linearization degrades");
    if (std::abs(p.epsilon) > 0.05)
        warnings.push_back("epsilon exceeds 0.05; small-signal linearization degrades");
    return warnings;
}

inline std::vector<std::string> validate_gains(const std::vector<double>& gains) {
    std::vector<std::string> warnings;
    for (double g : gains)
        if (g > 0.3) {
            warnings.push_back("stage gain exceeds 0.3; low-gain stage model degrades");
            break;
        }
    return warnings;
}

// Classical Mach-Zehnder: coherent seed, two splitters, arm phase on mode 1.
inline Circuit preset_mzi(double t1, double t2, double phi, std::complex<double> alpha) {
    detail::require_unit_interval(t1, "T1");
    detail::require_unit_interval(t2, "T2");
    Circuit c{2, {}};
    c.elements.push_back(make_displace(0, alpha));
    c.elements.push_back(make_beam_splitter(0, 1, t1));
    c.elements.push_back(make_phase_shifter(1, phi));
    c.elements.push_back(make_beam_splitter(0, 1, t2));
    return c;
}

// Mach-Zehnder with a squeezed state injected at the normally unused input
// port. The squeezed mode is prepared from a two-mode squeezer and a balanced
// splitter on modes 1 and 2; sq_orientation rotates the squeezing ellipse.
inline Circuit preset_mzi_squeezed(double t1, double t2, double phi, std::complex<double> alpha,
                                   double sq_gain, double sq_orientation = 0.0) {
    detail::require_unit_interval(t1, "T1");
    detail::require_unit_interval(t2, "T2");
    detail::require_nonnegative(sq_gain, "squeeze gain");
    Circuit c{3, {}};
    c.elements.push_back(make_squeezer(1, 2, sq_gain, 0.0));
    c.elements.push_back(make_beam_splitter(1, 2, 0.5));
    c.elements.push_back(make_phase_shifter(1, sq_orientation));
    c.elements.push_back(make_displace(0, alpha));
    c.elements.push_back(make_beam_splitter(0, 1, t1));
    c.elements.push_back(make_phase_shifter(1, phi));
    c.elements.push_back(make_beam_splitter(0, 1, t2));
    return c;
}

inline Circuit preset_sui(const SuiParams& p) {
    detail::require_nonnegative(p.g1, "g1");
    detail::require_nonnegative(p.g2, "g2");
    detail::require_unit_interval(p.internal_loss, "internal_loss");
    detail::require_unit_interval(p.external_loss, "external_loss");
    const double big_g1 = std::sqrt(1.0 + p.g1 * p.g1);
    const double eta = std::sqrt(1.0 - p.internal_loss);
    Circuit c{2, {}};
    c.elements.push_back(make_displace(0, p.alpha));
    c.elements.push_back(make_squeezer(0, 1, p.g1, 0.0));
    c.elements.push_back(make_loss(0, p.internal_loss));
    c.elements.push_back(make_loss(1, p.internal_loss));
    // Amplitude modulation: displace each modulated arm by epsilon times its
    // own amplitude at that point in the network.
    if (p.dual_beam)
        c.elements.push_back(make_displace(0, p.epsilon * big_g1 * p.alpha * eta));
    c.elements.push_back(make_displace(1, p.epsilon * p.g1 * std::conj(p.alpha) * eta));
    c.elements.push_back(make_phase_shifter(0, p.phi1 + (p.dual_beam ? p.delta : 0.0)));
    c.elements.push_back(make_phase_shifter(1, p.phi2 + p.delta));
    c.elements.push_back(make_squeezer(0, 1, p.g2, 0.0));
    c.elements.push_back(make_loss(0, p.external_loss));
    c.elements.push_back(make_loss(1, p.external_loss));
    return c;
}

// Parametric amplifier followed by an ordinary beam splitter (the hybrid
// scheme): the entangled arms interfere directly on the splitter.
inline Circuit preset_pa_bs(double g1, double transmissivity, std::complex<double> alpha,
                            double phi1, double phi2) {
    detail::require_nonnegative(g1, "g1");
    detail::require_unit_interval(transmissivity, "T");
    Circuit c{2, {}};
    c.elements.push_back(make_displace(0, alpha));
    c.elements.push_back(make_squeezer(0, 1, g1, 0.0));
    c.elements.push_back(make_phase_shifter(0, phi1));
    c.elements.push_back(make_phase_shifter(1, phi2));
    c.elements.push_back(make_beam_splitter(0, 1, transmissivity));
    return c;
}

// Truncated scheme: one amplifier, homodyne detection on both arms, and an
// electronic mixer Y1 + w*Y2 in place of the second amplifier. The mixing is
// measurement-side, so it is returned as a MeasurementSpec, not an element.
inline std::pair<Circuit, MeasurementSpecd> preset_truncated(double g1, std::complex<double> alpha,
                                                             double mix_weight) {
    detail::require_nonnegative(g1, "g1");
    Circuit c{2, {}};
    c.elements.push_back(make_displace(0, alpha));
    c.elements.push_back(make_squeezer(0, 1, g1, 0.0));
    MeasurementSpecd spec;
    spec.terms.push_back({0, M_PI / 2, 1.0});
    spec.terms.push_back({1, M_PI / 2, mix_weight});
    return {c, spec};
}

// Cascaded amplifiers with a dispersive gap phase. theta is the total phase a
// photon pair picks up per gap; it is shared equally by the two modes, since
// only the pair phase enters the stage interference.
inline Circuit preset_multistage(const std::vector<double>& stage_gains, double theta) {
    if (stage_gains.empty()) throw std::invalid_argument("multistage needs at least one gain");
    for (double g : stage_gains) detail::require_nonnegative(g, "stage gain");
    Circuit c{2, {}};
    c.elements.push_back(make_squeezer(0, 1, stage_gains[0], 0.0));
    for (std::size_t k = 1; k < stage_gains.size(); ++k) {
        c.elements.push_back(make_phase_shifter(0, theta / 2.0));
        c.elements.push_back(make_phase_shifter(1, theta / 2.0));
        c.elements.push_back(make_squeezer(0, 1, stage_gains[k], 0.0));
    }
    return c;
}

}  // namespace su11
