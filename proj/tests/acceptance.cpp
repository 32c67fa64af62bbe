// Acceptance gate. Runs every headline claim of the library end to end and
// prints one [PASS]/[FAIL] line per criterion. Criterion 5 is expected to
// fail: the measured joint readout reaches 2 u^4 a^2 d^2, and the best
// electronic weight reaches 2 (u^4 + u^-4) a^2 d^2, which saturates the
// information carried by the two output beams; the advertised target
// 2 (u^4 + 1) a^2 d^2 exceeds that bound for every finite gain. The exit
// code counts criteria whose outcome differs from the expected table, so a
// clean run exits 0 with criterion 5 honestly red.

#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <su11/circuit.hpp>
#include <su11/gaussian_state.hpp>
#include <su11/jsf.hpp>
#include <su11/metrology.hpp>
#include <su11/oracles.hpp>

#include "fock_oracle.hpp"

using namespace su11;

namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
    std::vector<std::string> notes;
};

CircuitBuilder mzi_builder(double t1, double t2, double alpha) {
    return [=](double d) { return preset_mzi(t1, t2, M_PI / 2.0 + d, alpha); };
}

CircuitBuilder sui_builder(double g1, double g2, double alpha, bool dual = false) {
    return [=](double d) {
        SuiParams p;
        p.g1 = g1;
        p.g2 = g2;
        p.alpha = alpha;
        p.phi1 = 0.0;
        p.phi2 = M_PI;
        p.delta = d;
        p.dual_beam = dual;
        return preset_sui(p);
    };
}

const MeasurementSpecd kY1{{{0, M_PI / 2.0, 1.0}}};

// 1. A classical Mach-Zehnder with a strong seed sits at the shot-noise
// limit: snl_ratio within 1e-3 of unity at i_ps = 1e4 sensing photons. The
// engine value is t1 (1 - d^2/12), so the bound is taken inclusive of the
// t1 = 0.999 boundary to within a relative 1e-5.
Outcome criterion1() {
    const double t1 = 0.999, t2 = 0.5, delta = 1e-4;
    const double alpha = std::sqrt(1e4 / (1.0 - t1));
    auto b = mzi_builder(t1, t2, alpha);
    const auto spec = balanced_detection_spec(run(b(0.0)), 0, 1);
    const auto rep = snr(b, spec, delta, "mzi_classical");
    const double off = std::abs(rep.snl_ratio - 1.0);
    Outcome o;
    o.pass = std::abs(rep.i_ps - 1e4) <= 1e-6 * 1e4 && off <= 1e-3 * (1.0 + 1e-5);
    o.detail = fmt("i_ps=%.6g snl_ratio=%.9f |1-snl|=%.3e (bound 1.00001e-03)",
                   rep.i_ps, rep.snl_ratio, off);
    return o;
}

// 2. Balanced interferometer, equal pump gains: both output ports return to
// vacuum noise in every quadrature.
Outcome criterion2() {
    SuiParams p;
    p.g1 = p.g2 = 0.75;
    p.phi1 = 0.0;
    p.phi2 = M_PI;
    p.alpha = 10.0;
    const auto st = run(preset_sui(p));
    double worst = 0.0;
    for (int k = 0; k < 32; ++k) {
        const double theta = k * M_PI / 16.0;
        for (Eigen::Index mode = 0; mode < 2; ++mode) {
            const double var = homodyne_moments(st, MeasurementSpecd{{{mode, theta, 1.0}}}).second;
            worst = std::max(worst, std::abs(var - 1.0));
        }
    }
    Outcome o;
    o.pass = worst <= 1e-9;
    o.detail = fmt("max |var - 1| over 32 angles x 2 ports = %.3e (bound 1e-09)", worst);
    return o;
}

// 3. At equal sensing photons the entangled interferometer beats the
// classical one by 3.01 dB (the large-gain port-1 advantage 4 g2^2 / D vs
// 16 t1 t2 r2 per photon).
Outcome criterion3() {
    const double delta = 1e-4, ips = 56.25;
    auto sui = sui_builder(0.75, 50.0, 10.0);
    const double t1 = 0.999;
    auto mzi = mzi_builder(t1, 0.5, std::sqrt(ips / (1.0 - t1)));
    const auto rs = snr(sui, kY1, delta, "sui_port1");
    const auto rm = snr(mzi, balanced_detection_spec(run(mzi(0.0)), 0, 1), delta, "mzi_classical");
    const double diff = rs.snr_db - rm.snr_db;
    Outcome o;
    o.pass = std::abs(rs.i_ps - ips) <= 1e-9 * ips && std::abs(rm.i_ps - ips) <= 1e-9 * ips &&
             std::abs(diff - 3.01) <= 0.05;
    o.detail = fmt("i_ps=%.4f both arms, snr gain = %.4f dB (target 3.01 +/- 0.05)", ips, diff);
    return o;
}

// 4. Large analyzer gain: the port-1 sensitivity approaches the joint
// optimum 2 u^2 i_ps d^2, within 1e-4 at g2 = 1e3.
Outcome criterion4() {
    const double g1 = 0.75, g2 = 1e3, alpha = 10.0, delta = 1e-4;
    const double u = std::sqrt(1.0 + g1 * g1) + g1;
    const auto rep = snr(sui_builder(g1, g2, alpha), kY1, delta, "sui_port1");
    const double ratio = rep.snr / (2.0 * u * u * rep.i_ps * delta * delta);
    Outcome o;
    o.pass = std::abs(ratio - 1.0) <= 1e-4;
    o.detail = fmt("snr / (2 u^2 i_ps d^2) = %.8f at g2=1e3 (bound 1e-04)", ratio);
    return o;
}

// 5. Dual-seed joint readout vs the advertised 4 u^2 (G1^2 + g1^2) a^2 d^2.
// Expected to fail; the notes record what the engine does reach.
Outcome criterion5() {
    const double g2 = 0.75, alpha = 10.0, delta = 1e-4;
    Outcome o;
    o.pass = true;
    for (double g1 : {0.2, 0.75, 1.5}) {
        const double big_g1 = std::sqrt(1.0 + g1 * g1);
        const double big_g2 = std::sqrt(1.0 + g2 * g2);
        const double u = big_g1 + g1;
        const double u4 = u * u * u * u;
        const double a2d2 = alpha * alpha * delta * delta;
        const double target = 4.0 * u * u * (big_g1 * big_g1 + g1 * g1) * a2d2;

        auto dual = sui_builder(g1, g2, alpha, true);
        const double measured = snr(dual, jm_measurement(0, 1), delta, "dual_joint").snr;
        const double gap = std::abs(measured / target - 1.0);
        if (gap > 1e-6) o.pass = false;

        const double A = big_g1 * big_g2 - g1 * g2;
        const double B = big_g2 * g1 - big_g1 * g2;
        const double At = big_g1 * big_g2 + g1 * g2;
        const double Bt = big_g1 * g2 + g1 * big_g2;
        const double D = 1.0 + 2.0 * B * B;
        const double lam = (2.0 * A * B * At + D * Bt) / (D * At + 2.0 * A * B * Bt);
        const double best = snr(dual, jm_measurement(0, 1, lam), delta, "dual_joint").snr;

        o.notes.push_back(fmt(
            "  g1=%.2f: measured/target = %.6f; measured / (2 u^4 a^2 d^2) = %.9f;"
            " best weight %.6f gives best / (2 (u^4 + u^-4) a^2 d^2) = %.9f",
            g1, measured / target, measured / (2.0 * u4 * a2d2), lam,
            best / (2.0 * (u4 + 1.0 / u4) * a2d2)));
    }
    o.notes.push_back(
        "  the joint readout at unit weight realizes 2 u^4 a^2 d^2 and the optimal weight");
    o.notes.push_back(
        "  saturates 2 (u^4 + u^-4) a^2 d^2, the full information in the two beams; the");
    o.notes.push_back(
        "  advertised 2 (u^4 + 1) a^2 d^2 exceeds that bound for every finite gain.");
    o.detail = o.pass ? "all gains within 1e-6 of target"
                      : "joint readout falls short of the advertised target (see notes)";
    return o;
}

// 6. Loss placement. (a) detection loss after the analyzer barely matters:
// 50% external loss costs under 1% of the SNR at G2 = 10. (b) the loss
// channel obeys the squeezed-variance law (1-L) e^-2r + L exactly. (c) loss
// between the amplifiers degrades like loss on a squeezed state with
// e^2r = 1/u^2.
Outcome criterion6() {
    const double delta = 1e-4;
    auto lossy = [](double g1, double g2, LossSite site) {
        return LossyCircuitBuilder([g1, g2, site](double d, double loss) {
            SuiParams p;
            p.g1 = g1;
            p.g2 = g2;
            p.alpha = 10.0;
            p.phi1 = 0.0;
            p.phi2 = M_PI;
            p.delta = d;
            if (site == LossSite::Internal)
                p.internal_loss = loss;
            else
                p.external_loss = loss;
            return preset_sui(p);
        });
    };

    const auto ext = snr_vs_loss(lossy(0.2, std::sqrt(99.0), LossSite::External), kY1, delta,
                                 {0.0, 0.5}, LossSite::External);
    const double ratio = ext[1].report.snr / ext[0].report.snr;
    const bool pass_a = std::abs(ratio - 0.992578554201036) <= 1e-9 && 1.0 - ratio < 0.01;

    const double r = std::log(2.0);
    double worst_b = 0.0;
    for (double L : {0.1, 0.5, 0.9}) {
        GaussianStated sq = vacuum_stated(1);
        sq.cov(0, 0) = std::exp(-2.0 * r);
        sq.cov(1, 1) = std::exp(2.0 * r);
        const auto out = apply_element(sq, make_loss(0, L));
        worst_b = std::max(worst_b,
                           std::abs(out.cov(0, 0) - ((1.0 - L) * std::exp(-2.0 * r) + L)));
        worst_b = std::max(worst_b,
                           std::abs(out.cov(1, 1) - ((1.0 - L) * std::exp(2.0 * r) + L)));
    }
    const bool pass_b = worst_b <= 1e-9;

    const double g1 = 0.75;
    const double e2r = 1.0 / std::pow(std::sqrt(1.0 + g1 * g1) + g1, 2.0);
    const auto in = snr_vs_loss(lossy(g1, 1e3, LossSite::Internal), kY1, delta,
                                {0.0, 0.25, 0.5, 0.8}, LossSite::Internal);
    double worst_c = 0.0;
    for (const auto& row : in) {
        const double L = row.loss;
        const double want = (1.0 - L) * e2r / ((1.0 - L) * e2r + L);
        worst_c = std::max(worst_c, std::abs(row.report.snr / in[0].report.snr - want));
    }
    const bool pass_c = worst_c <= 1e-6;

    Outcome o;
    o.pass = pass_a && pass_b && pass_c;
    o.detail = fmt(
        "external 50%% loss keeps %.4f%% of snr (<1%% lost); squeezed-law dev %.2e;"
        " internal-loss law dev %.2e",
        100.0 * ratio, worst_b, worst_c);
    return o;
}

// 7. Resource sharing: split phase / amplitude readout SNRs sum to the
// single-signal optimum in the large-g2 regime, across random draws.
Outcome criterion7() {
    std::mt19937 rng(20260823u);
    std::uniform_real_distribution<double> dg1(0.1, 1.2), dg2(50.0, 150.0), da(2.0, 20.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto rep = resource_sharing_report(dg1(rng), dg2(rng), da(rng), 1e-4, i % 2 == 1);
        worst = std::max(worst, std::abs(rep.sum / rep.snr_op - 1.0));
    }
    Outcome o;
    o.pass = worst <= 1e-6;
    o.detail = fmt("max |sum/optimum - 1| over 20 draws = %.3e (bound 1e-06)", worst);
    return o;
}

// 8. Tapping coefficients: T1 + T2 = 2 at operating gain, and the two
// coefficients equalize as the analyzer gain grows.
Outcome criterion8() {
    const auto op = tapping_coefficients(0.75, 50.0, 10.0, 1e-4);
    const auto deep = tapping_coefficients(0.75, 2000.0, 10.0, 1e-4);
    Outcome o;
    o.pass = std::abs(op.sum - 2.0) < 0.01 && std::abs(deep.t1 / deep.t2 - 1.0) <= 1e-6;
    o.detail = fmt("T1+T2 = %.8f at g2=50; T1/T2 - 1 = %.2e at g2=2000", op.sum,
                   deep.t1 / deep.t2 - 1.0);
    return o;
}

// 9. Inseparability witness: direct homodyne and amplifier-assisted joint
// readout agree at 0.25 for the g = 0.75 source, independent of analyzer
// gain, and survive 50% detection loss to within 1%.
Outcome criterion9() {
    Circuit source{2, {make_squeezer(0, 1, 0.75, 0.0)}};
    const double direct = inseparability_direct(run(source), 0, 1, 1.0);
    double worst = std::abs(direct - 0.25);
    for (double big_g : {1.5, 3.0, 10.0}) {
        const auto rep = inseparability_via_amplifier(0.75, std::sqrt(big_g * big_g - 1.0), 0.0, 1.0);
        worst = std::max(worst, std::abs(rep.i_amp_jm - 0.25));
    }
    const auto clean = inseparability_via_amplifier(0.75, std::sqrt(99.0), 0.0, 1.0);
    const auto dirty = inseparability_via_amplifier(0.75, std::sqrt(99.0), 0.5, 1.0);
    const double drift = std::abs(dirty.i_amp_jm - clean.i_amp_jm) / clean.i_amp_jm;
    Outcome o;
    o.pass = worst <= 1e-9 && drift < 0.01;
    o.detail = fmt("witness dev %.2e across G in {1.5,3,10} (bound 1e-09);"
                   " 50%% detection loss shifts it %.4f%% (<1%%)",
                   worst, 100.0 * drift);
    return o;
}

// 10. Fock-space cross-validation of every circuit element at cutoff 20,
// weak-gain / weak-seed regime.
Outcome criterion10() {
    double worst = 0.0;
    auto compare = [&worst](const GaussianStated& a, const GaussianStated& b) {
        worst = std::max(worst, (a.mean - b.mean).cwiseAbs().maxCoeff());
        worst = std::max(worst, (a.cov - b.cov).cwiseAbs().maxCoeff());
    };

    {
        fock::FockSim sim({20, 20});
        sim.displace(0, {0.3, -0.15});
        sim.displace(1, {-0.1, 0.22});
        sim.two_mode_squeeze(0, 1, 0.3, 0.9);
        sim.beam_split(0, 1, 0.35);
        sim.phase_shift(1, 1.234);

        GaussianStated st = vacuum_stated(2);
        st = apply_element(st, make_displace(0, {0.3, -0.15}));
        st = apply_element(st, make_displace(1, {-0.1, 0.22}));
        st = apply_element(st, make_squeezer(0, 1, 0.3, 0.9));
        st = apply_element(st, make_beam_splitter(0, 1, 0.35));
        st = apply_element(st, make_phase_shifter(1, 1.234));
        compare(sim.moments({0, 1}), st);
    }
    {
        fock::FockSim sim({20, 20, 10});
        sim.displace(0, {0.8, 0.2});
        sim.two_mode_squeeze(0, 1, 0.25);
        sim.loss_into(0, 2, 0.4);

        GaussianStated st = vacuum_stated(2);
        st = apply_element(st, make_displace(0, {0.8, 0.2}));
        st = apply_element(st, make_squeezer(0, 1, 0.25, 0.0));
        st = apply_element(st, make_loss(0, 0.4));
        compare(sim.moments({0, 1}), st);
    }

    Outcome o;
    o.pass = worst <= 1e-6;
    o.detail = fmt("max |moment difference| vs Fock simulation = %.3e (bound 1e-06)", worst);
    return o;
}

// 11. Mode engineering: N^2 coherent rate enhancement, stage-gain
// interference law, binomial apodization, and Schmidt-number convergence.
Outcome criterion11() {
    Outcome o;
    o.pass = true;

    const auto axis = linear_axis(-3.0, 3.0, 101);
    double worst_rate = 0.0;
    for (int n : {2, 3, 5}) {
        StageSpec spec;
        spec.gains.assign(n, 0.05);
        spec.sigma_p = 0.7;
        const auto res = jsf_multistage(axis, axis, spec);
        worst_rate = std::max(worst_rate, std::abs(res.rate_enhancement / (n * n) - 1.0));
    }
    if (worst_rate > 5e-3) o.pass = false;

    double worst_circuit = 0.0;
    const double g = 0.005;
    const double single = mean_photon(run(preset_multistage({g}, 0.0)));
    for (int n : {2, 3, 5}) {
        const double total = mean_photon(run(preset_multistage(std::vector<double>(n, g), 0.0)));
        worst_circuit = std::max(worst_circuit, std::abs(total / (n * n * single) - 1.0));
    }
    if (worst_circuit > 5e-3) o.pass = false;

    double worst_dirichlet = 0.0;
    for (int n : {2, 3, 5}) {
        const std::vector<double> gains(n, 0.05);
        for (int j = 0; j <= 10000; ++j) {
            const double theta = 2.0 * M_PI * j / 10000.0;
            const double got = std::abs(stage_gain_total(theta, gains));
            const double s = std::sin(0.5 * theta);
            const double want = std::abs(s) < 1e-12
                                    ? 0.05 * n
                                    : 0.05 * std::abs(std::sin(0.5 * n * theta) / s);
            worst_dirichlet = std::max(worst_dirichlet, std::abs(got - want));
        }
    }
    if (worst_dirichlet > 1e-12) o.pass = false;

    bool monotone = true;
    for (const auto& gains : {std::vector<double>{0.05, 0.10, 0.05},
                              std::vector<double>{0.05, 0.15, 0.15, 0.05}}) {
        double prev = std::abs(stage_gain_total(1e-4, gains));
        for (int j = 2; j <= 2000; ++j) {
            const double theta = M_PI * j / 2000.0;
            const double cur = std::abs(stage_gain_total(theta, gains));
            if (cur >= prev) monotone = false;
            prev = cur;
        }
    }
    if (!monotone) o.pass = false;

    JSFGrid product;
    product.omega_s = axis;
    product.omega_i = axis;
    product.amp.resize(axis.size(), axis.size());
    for (Eigen::Index i = 0; i < product.amp.rows(); ++i)
        for (Eigen::Index j = 0; j < product.amp.cols(); ++j)
            product.amp(i, j) = std::exp(-axis[i] * axis[i] / 2.0 - axis[j] * axis[j] / 4.0);
    product.normalize();
    const auto sep = schmidt_analysis(product);
    if (std::abs(sep.schmidt_number - 1.0) > 1e-6) o.pass = false;

    auto ridge = [](int n) {
        const auto ax = linear_axis(-6.0, 6.0, n);
        JSFGrid grid;
        grid.omega_s = ax;
        grid.omega_i = ax;
        grid.amp.resize(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double xm = (ax[i] - ax[j]) / std::sqrt(2.0);
                const double xp = (ax[i] + ax[j]) / std::sqrt(2.0);
                grid.amp(i, j) = std::exp(-xm * xm / (2.0 * 0.2 * 0.2) - xp * xp / (2.0 * 2.0 * 2.0));
            }
        grid.normalize();
        return schmidt_analysis(grid).schmidt_number;
    };
    const double k151 = ridge(151), k301 = ridge(301);
    const double refine = std::abs(k151 - k301) / k301;
    if (refine > 0.01) o.pass = false;

    o.detail = fmt(
        "rate dev %.2e (jsf) / %.2e (circuit, g=0.005); interference law dev %.2e;"
        " apodized profile monotone: %s; separable K-1 = %.2e; K refinement %.3f%%",
        worst_rate, worst_circuit, worst_dirichlet, monotone ? "yes" : "no",
        sep.schmidt_number - 1.0, 100.0 * refine);
    return o;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* title;
        Outcome (*fn)();
        bool expected;
    };
    const Entry entries[] = {
        {1, "classical interferometer sits at the shot-noise limit", criterion1, true},
        {2, "balanced equal-gain output returns to vacuum noise", criterion2, true},
        {3, "3 dB advantage at equal sensing photons", criterion3, true},
        {4, "port-1 readout approaches the joint optimum at large gain", criterion4, true},
        {5, "dual-seed joint readout reaches 4 u^2 (G1^2+g1^2) a^2 d^2", criterion5, false},
        {6, "loss placement: external benign, internal like squeezed light", criterion6, true},
        {7, "phase and amplitude channels share the optimum sensitivity", criterion7, true},
        {8, "tapping coefficients sum to 2 and equalize at large gain", criterion8, true},
        {9, "amplifier-assisted witness matches direct homodyne", criterion9, true},
        {10, "Gaussian engine matches Fock-space simulation", criterion10, true},
        {11, "multistage mode engineering laws hold", criterion11, true},
    };

    int mismatches = 0, passed = 0, expected_red = 0;
    for (const auto& e : entries) {
        const Outcome o = e.fn();
        std::printf("[%s] criterion %2d: %s\n        %s\n", o.pass ? "PASS" : "FAIL", e.id,
                    e.title, o.detail.c_str());
        for (const auto& note : o.notes) std::printf("%s\n", note.c_str());
        if (o.pass) ++passed;
        if (!o.pass && !e.expected) ++expected_red;
        if (o.pass != e.expected) {
            ++mismatches;
            std::printf("        UNEXPECTED: this criterion was expected to %s\n",
                        e.expected ? "pass" : "fail");
        }
    }
    std::printf("acceptance: %d of 11 pass, %d expected red, %d unexpected outcome(s)\n", passed,
                expected_red, mismatches);
    return mismatches;
}
