#include "su11/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

namespace su11 {

namespace {

using nlohmann::json;

constexpr const char* kCsvHeader = "scheme,param_json,i_ps,signal,noise,snr,snr_db,snr_oracle,rel_err";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

[[noreturn]] void parse_fail(const std::string& path, const std::string& text, std::size_t byte,
                             const char* what) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min(byte > 0 ? byte - 1 : std::size_t{0}, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
    return v.get<int>();
}

void check_range(const std::string& key, double v) {
    auto fail = [&](const char* need) {
        throw ConfigError("'" + key + "' " + need);
    };
    if (!std::isfinite(v)) fail("must be finite");
    if (key == "g1" || key == "g2" || key == "r" || key == "alpha" || key == "mix_weight") {
        if (v < 0.0) fail("must be >= 0");
    } else if (key == "delta" || key == "epsilon") {
        if (!(v > 0.0 && v <= 0.05)) fail("must be in (0, 0.05]");
    } else if (key == "t1" || key == "t2" || key == "bs_t" || key == "internal_loss" ||
               key == "external_loss") {
        if (!(v >= 0.0 && v <= 1.0)) fail("must be in [0, 1]");
    }
}

bool is_sweepable(const std::string& key) {
    static const std::set<std::string> keys = {"g1",  "g2", "alpha",      "delta",
                                              "epsilon", "t1", "t2",     "r",
                                              "bs_t",    "mix_weight",   "internal_loss",
                                              "external_loss"};
    return keys.count(key) > 0;
}

std::optional<Scheme> parse_scheme(const std::string& name) {
    for (Scheme s : {Scheme::MziClassical, Scheme::MziSqueezed, Scheme::SuiPort1,
                     Scheme::SuiPort2, Scheme::SuiJoint, Scheme::SuiOptimum, Scheme::PaBs,
                     Scheme::Truncated, Scheme::DualBeamPort, Scheme::DualBeamJoint,
                     Scheme::DualBeamAmplitude})
        if (name == scheme_name(s)) return s;
    return std::nullopt;
}

bool is_sui_family(Scheme s) {
    switch (s) {
        case Scheme::SuiPort1:
        case Scheme::SuiPort2:
        case Scheme::SuiJoint:
        case Scheme::SuiOptimum:
        case Scheme::DualBeamPort:
        case Scheme::DualBeamJoint:
        case Scheme::DualBeamAmplitude:
            return true;
        default:
            return false;
    }
}

bool is_dual(Scheme s) {
    return s == Scheme::DualBeamPort || s == Scheme::DualBeamJoint ||
           s == Scheme::DualBeamAmplitude;
}

void apply_param(ScenarioConfig& c, const std::string& key, double v) {
    check_range(key, v);
    if (key == "g1") {
        c.params.g1 = v;
        if (c.bs_t_auto) c.params.bs_t = optimal_bs_transmission(v);
    } else if (key == "g2")
        c.params.g2 = v;
    else if (key == "alpha")
        c.params.alpha = v;
    else if (key == "delta")
        c.params.delta = v;
    else if (key == "epsilon")
        c.params.epsilon = v;
    else if (key == "t1")
        c.params.t1 = v;
    else if (key == "t2")
        c.params.t2 = v;
    else if (key == "r")
        c.params.r = v;
    else if (key == "bs_t") {
        c.params.bs_t = v;
        c.bs_t_auto = false;
    } else if (key == "mix_weight")
        c.params.mix_weight = v;
    else if (key == "internal_loss")
        c.internal_loss = v;
    else if (key == "external_loss")
        c.external_loss = v;
    else
        throw ConfigError("unknown sweep parameter '" + key + "'");
}

SweepSpec load_sweep(const json& j) {
    check_keys(j, {"parameter", "from", "to", "steps"}, "'sweep'");
    SweepSpec s;
    if (!j.contains("parameter") || !j.at("parameter").is_string())
        throw ConfigError("'sweep.parameter' must name a numeric parameter");
    s.parameter = j.at("parameter").get<std::string>();
    if (!is_sweepable(s.parameter))
        throw ConfigError("'" + s.parameter + "' is not a sweepable parameter");
    if (!j.contains("from") || !j.contains("to") || !j.contains("steps"))
        throw ConfigError("'sweep' needs 'from', 'to' and 'steps'");
    s.from = as_number(j.at("from"), "sweep.from");
    s.to = as_number(j.at("to"), "sweep.to");
    s.steps = as_int(j.at("steps"), "sweep.steps");
    if (s.steps < 1) throw ConfigError("'sweep.steps' must be >= 1");
    return s;
}

AxisSpec load_axis(const json& j) {
    check_keys(j, {"min", "max", "points"}, "'jsf.grid'");
    AxisSpec a;
    if (j.contains("min")) a.min = as_number(j.at("min"), "jsf.grid.min");
    if (j.contains("max")) a.max = as_number(j.at("max"), "jsf.grid.max");
    if (j.contains("points")) a.points = as_int(j.at("points"), "jsf.grid.points");
    if (!(a.max > a.min)) throw ConfigError("'jsf.grid' needs max > min");
    if (a.points < 2) throw ConfigError("'jsf.grid.points' must be >= 2");
    return a;
}

JsfScenario load_jsf(const json& j) {
    check_keys(j, {"gains", "binomial", "beta", "l_dm", "sigma_p", "grid", "mismatch", "filter"},
               "'jsf'");
    JsfScenario js;
    const bool has_gains = j.contains("gains");
    const bool has_binomial = j.contains("binomial");
    if (has_gains == has_binomial)
        throw ConfigError("'jsf' needs exactly one of 'gains' or 'binomial'");
    if (has_gains) {
        const json& g = j.at("gains");
        if (!g.is_array() || g.empty()) throw ConfigError("'jsf.gains' must be a non-empty array");
        for (const json& v : g) js.gains.push_back(as_number(v, "jsf.gains[]"));
        for (double v : js.gains)
            if (!(v >= 0.0)) throw ConfigError("'jsf.gains' entries must be >= 0");
        if (!(js.gains.front() > 0.0)) throw ConfigError("the first stage gain must be > 0");
    } else {
        const json& b = j.at("binomial");
        check_keys(b, {"stages", "l1", "gain_scale"}, "'jsf.binomial'");
        if (!b.contains("stages")) throw ConfigError("'jsf.binomial' needs 'stages'");
        js.binomial_stages = as_int(b.at("stages"), "jsf.binomial.stages");
        if (js.binomial_stages < 1) throw ConfigError("'jsf.binomial.stages' must be >= 1");
        if (b.contains("l1")) js.binomial_l1 = as_number(b.at("l1"), "jsf.binomial.l1");
        if (!(js.binomial_l1 > 0.0)) throw ConfigError("'jsf.binomial.l1' must be > 0");
        if (b.contains("gain_scale"))
            js.gain_scale = as_number(b.at("gain_scale"), "jsf.binomial.gain_scale");
        if (!(js.gain_scale > 0.0)) throw ConfigError("'jsf.binomial.gain_scale' must be > 0");
    }
    if (j.contains("beta")) js.beta = as_number(j.at("beta"), "jsf.beta");
    if (j.contains("l_dm")) js.l_dm = as_number(j.at("l_dm"), "jsf.l_dm");
    if (js.l_dm < 0.0) throw ConfigError("'jsf.l_dm' must be >= 0");
    if (j.contains("sigma_p")) js.sigma_p = as_number(j.at("sigma_p"), "jsf.sigma_p");
    if (!(js.sigma_p > 0.0)) throw ConfigError("'jsf.sigma_p' must be > 0");
    if (j.contains("grid")) js.grid = load_axis(j.at("grid"));
    if (j.contains("mismatch")) {
        const json& m = j.at("mismatch");
        check_keys(m, {"slope_s", "slope_i", "length"}, "'jsf.mismatch'");
        LinearMismatch lin;
        if (m.contains("slope_s")) lin.slope_s = as_number(m.at("slope_s"), "jsf.mismatch.slope_s");
        if (m.contains("slope_i")) lin.slope_i = as_number(m.at("slope_i"), "jsf.mismatch.slope_i");
        if (m.contains("length")) lin.length = as_number(m.at("length"), "jsf.mismatch.length");
        if (!(lin.length > 0.0)) throw ConfigError("'jsf.mismatch.length' must be > 0");
        js.mismatch = lin;
    }
    if (j.contains("filter")) {
        const json& f = j.at("filter");
        if (!f.is_array() || f.size() != 4)
            throw ConfigError("'jsf.filter' must be [s_min, s_max, i_min, i_max]");
        std::array<double, 4> box{};
        for (std::size_t k = 0; k < 4; ++k) box[k] = as_number(f[k], "jsf.filter[]");
        if (!(box[0] <= box[1] && box[2] <= box[3]))
            throw ConfigError("'jsf.filter' bounds must be ordered");
        js.filter = box;
    }
    return js;
}

FringeSpec load_fringe(const json& j) {
    check_keys(j, {"from", "to", "points"}, "'fringe'");
    FringeSpec f;
    if (j.contains("from")) f.from = as_number(j.at("from"), "fringe.from");
    if (j.contains("to")) f.to = as_number(j.at("to"), "fringe.to");
    if (j.contains("points")) f.points = as_int(j.at("points"), "fringe.points");
    if (!(f.to > f.from)) throw ConfigError("'fringe' needs to > from");
    if (f.points < 2) throw ConfigError("'fringe.points' must be >= 2");
    return f;
}

std::vector<QuadratureCoefficientd> load_measurement(const json& j) {
    if (!j.is_array() || j.empty())
        throw ConfigError("'measurement' must be a non-empty array of terms");
    std::vector<QuadratureCoefficientd> terms;
    for (const json& t : j) {
        check_keys(t, {"mode", "angle", "weight"}, "'measurement[]'");
        QuadratureCoefficientd q;
        if (!t.contains("mode")) throw ConfigError("'measurement[]' needs 'mode'");
        const int mode = as_int(t.at("mode"), "measurement[].mode");
        if (mode < 0) throw ConfigError("'measurement[].mode' must be >= 0");
        q.mode = mode;
        if (t.contains("angle")) q.angle = as_number(t.at("angle"), "measurement[].angle");
        if (t.contains("weight")) q.weight = as_number(t.at("weight"), "measurement[].weight");
        terms.push_back(q);
    }
    return terms;
}

}  // namespace

ScenarioConfig load_config(const std::string& path) {
    const std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(path, text, e.byte, e.what());
    }
    if (!j.is_object()) throw ConfigError(path + ": top level must be a JSON object");

    static const std::set<std::string> top = {
        "description", "scheme",        "g1",      "g2",        "alpha",   "delta",
        "epsilon",     "t1",            "t2",      "r",         "bs_t",    "mix_weight",
        "internal_loss", "external_loss", "measurement", "sweep", "jsf",   "fringe",
        "out",         "tolerance",     "seed",    "configs"};
    check_keys(j, top, "the top level");

    ScenarioConfig c;
    if (j.contains("description") && !j.at("description").is_string())
        throw ConfigError("'description' must be a string");

    bool has_bs_t = false;
    for (const char* key : {"g1", "g2", "alpha", "delta", "epsilon", "t1", "t2", "r", "bs_t",
                            "mix_weight", "internal_loss", "external_loss"}) {
        if (!j.contains(key)) continue;
        const double v = as_number(j.at(key), key);
        check_range(key, v);
        apply_param(c, key, v);
        if (std::string(key) == "bs_t") has_bs_t = true;
    }

    if (j.contains("scheme")) {
        if (!j.at("scheme").is_string()) throw ConfigError("'scheme' must be a string");
        c.scheme = j.at("scheme").get<std::string>();
        if (!parse_scheme(c.scheme)) throw ConfigError("unknown scheme '" + c.scheme + "'");
    }
    if (c.scheme == "pa_bs" && !has_bs_t) {
        c.params.bs_t = optimal_bs_transmission(c.params.g1);
        c.bs_t_auto = true;
    }

    if (j.contains("measurement")) c.measurement = load_measurement(j.at("measurement"));
    if (j.contains("sweep")) c.sweep = load_sweep(j.at("sweep"));
    if (j.contains("jsf")) c.jsf = load_jsf(j.at("jsf"));
    if (j.contains("fringe")) c.fringe = load_fringe(j.at("fringe"));

    if (j.contains("out")) {
        if (!j.at("out").is_string()) throw ConfigError("'out' must be a string");
        c.out = j.at("out").get<std::string>();
    }
    if (j.contains("tolerance")) {
        const double tol = as_number(j.at("tolerance"), "tolerance");
        if (!(tol > 0.0)) throw ConfigError("'tolerance' must be > 0");
        c.tolerance = tol;
    }
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_integer() || s.get<long long>() < 0)
            throw ConfigError("'seed' must be a non-negative integer");
        c.seed = s.get<std::uint64_t>();
    }
    if (j.contains("configs")) {
        const json& list = j.at("configs");
        if (!list.is_array() || list.empty())
            throw ConfigError("'configs' must be a non-empty array of paths");
        const std::filesystem::path base = std::filesystem::path(path).parent_path();
        for (const json& entry : list) {
            if (!entry.is_string()) throw ConfigError("'configs' entries must be strings");
            std::filesystem::path p = entry.get<std::string>();
            c.suite.push_back(p.is_absolute() ? p.string() : (base / p).string());
        }
        c.suite_tolerance = c.tolerance;
    }

    if (c.suite.empty() && !c.jsf && c.scheme.empty())
        throw ConfigError(path + ": config needs a 'scheme' (or a 'jsf' / 'configs' block)");
    return c;
}

namespace {

struct SchemeRun {
    CircuitBuilder builder;
    MeasurementSpecd meas;
    double probe = 0.0;
};

CircuitBuilder with_output_loss(CircuitBuilder base, double loss) {
    if (loss == 0.0) return base;
    return [base, loss](double x) {
        Circuit c = base(x);
        for (Eigen::Index m = 0; m < c.n_modes; ++m) c.elements.push_back(make_loss(m, loss));
        return c;
    };
}

SchemeRun make_runner(Scheme s, const ScenarioConfig& c) {
    const OracleParams& p = c.params;
    SchemeRun r;
    r.probe = (s == Scheme::DualBeamAmplitude) ? p.epsilon : p.delta;

    switch (s) {
        case Scheme::MziClassical: {
            const double t1 = p.t1, t2 = p.t2, a = p.alpha;
            r.builder = [=](double d) { return preset_mzi(t1, t2, M_PI / 2.0 + d, a); };
            r.meas = balanced_detection_spec(run(r.builder(0.0)), 0, 1);
            break;
        }
        case Scheme::MziSqueezed: {
            const double t1 = p.t1, t2 = p.t2, a = p.alpha, gs = std::sinh(p.r);
            r.builder = [=](double d) {
                return preset_mzi_squeezed(t1, t2, M_PI / 2.0 + d, a, gs, 0.0);
            };
            r.meas = balanced_detection_spec(run(r.builder(0.0)), 0, 1);
            break;
        }
        case Scheme::PaBs: {
            const double g1 = p.g1, t = p.bs_t, a = p.alpha;
            r.builder = [=](double d) { return preset_pa_bs(g1, t, a, M_PI, d); };
            r.meas = MeasurementSpecd{{{1, M_PI / 2.0, 1.0}}};
            break;
        }
        case Scheme::Truncated: {
            auto [circ, meas] = preset_truncated(p.g1, p.alpha, p.mix_weight);
            r.builder = [circ](double d) {
                Circuit c2 = circ;
                c2.elements.push_back(make_phase_shifter(1, d));
                return c2;
            };
            r.meas = meas;
            break;
        }
        default: {
            SuiParams sp;
            sp.g1 = p.g1;
            sp.g2 = p.g2;
            sp.alpha = p.alpha;
            sp.phi1 = 0.0;
            sp.phi2 = M_PI;
            sp.internal_loss = c.internal_loss;
            sp.dual_beam = is_dual(s);
            const bool amplitude = (s == Scheme::DualBeamAmplitude);
            r.builder = [sp, amplitude](double x) {
                SuiParams q = sp;
                if (amplitude)
                    q.epsilon = x;
                else
                    q.delta = x;
                return preset_sui(q);
            };
            if (s == Scheme::SuiPort2)
                r.meas = MeasurementSpecd{{{1, M_PI / 2.0, 1.0}}};
            else if (s == Scheme::SuiJoint || s == Scheme::SuiOptimum ||
                     s == Scheme::DualBeamJoint)
                r.meas = jm_measurement(0, 1, p.mix_weight);
            else if (s == Scheme::DualBeamAmplitude)
                r.meas = MeasurementSpecd{{{1, 0.0, 1.0}}};
            else
                r.meas = MeasurementSpecd{{{0, M_PI / 2.0, 1.0}}};
            break;
        }
    }

    r.builder = with_output_loss(r.builder, c.external_loss);
    if (c.measurement) r.meas = MeasurementSpecd{*c.measurement};
    return r;
}

// Closed-form SNR the row is checked against. Absent when the scenario walks
// away from the operating point the closed form describes.
std::optional<double> scenario_oracle(Scheme s, const ScenarioConfig& c) {
    if (c.measurement) return std::nullopt;
    const OracleParams& p = c.params;
    if (c.internal_loss > 0.0) return std::nullopt;
    if (s == Scheme::PaBs && std::abs(p.bs_t - optimal_bs_transmission(p.g1)) > 1e-12)
        return std::nullopt;
    if ((s == Scheme::Truncated || s == Scheme::SuiJoint || s == Scheme::SuiOptimum ||
         s == Scheme::DualBeamJoint) &&
        std::abs(p.mix_weight - 1.0) > 1e-12)
        return std::nullopt;
    if (c.external_loss > 0.0) {
        if (c.external_loss < 1.0 && (s == Scheme::SuiPort1 || s == Scheme::SuiPort2))
            return oracle_loss(s, p, c.external_loss);
        return std::nullopt;
    }
    return oracle_snr(s, p);
}

json param_json_object(Scheme s, const ScenarioConfig& c) {
    const OracleParams& p = c.params;
    json pj;
    pj["alpha"] = p.alpha;
    switch (s) {
        case Scheme::MziClassical:
            pj["delta"] = p.delta;
            pj["t1"] = p.t1;
            pj["t2"] = p.t2;
            break;
        case Scheme::MziSqueezed:
            pj["delta"] = p.delta;
            pj["r"] = p.r;
            pj["t1"] = p.t1;
            pj["t2"] = p.t2;
            break;
        case Scheme::PaBs:
            pj["bs_t"] = p.bs_t;
            pj["delta"] = p.delta;
            pj["g1"] = p.g1;
            break;
        case Scheme::Truncated:
            pj["delta"] = p.delta;
            pj["g1"] = p.g1;
            pj["mix_weight"] = p.mix_weight;
            break;
        case Scheme::DualBeamAmplitude:
            pj["epsilon"] = p.epsilon;
            pj["g1"] = p.g1;
            pj["g2"] = p.g2;
            break;
        default:
            pj["delta"] = p.delta;
            pj["g1"] = p.g1;
            pj["g2"] = p.g2;
            if (s == Scheme::SuiJoint || s == Scheme::SuiOptimum || s == Scheme::DualBeamJoint)
                pj["mix_weight"] = p.mix_weight;
            break;
    }
    if (c.internal_loss > 0.0) pj["internal_loss"] = c.internal_loss;
    if (c.external_loss > 0.0) pj["external_loss"] = c.external_loss;
    return pj;
}

std::string quote_csv(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        out += ch;
        if (ch == '"') out += '"';
    }
    out += '"';
    return out;
}

std::string row_csv(const ScenarioRow& row) {
    std::string line = row.scheme + "," + quote_csv(row.param_json);
    line += "," + csv_number(row.report.i_ps);
    line += "," + csv_number(row.report.signal_power);
    line += "," + csv_number(row.report.noise_power);
    line += "," + csv_number(row.report.snr);
    line += "," + csv_number(row.report.snr_db);
    line += ",";
    if (row.snr_oracle) line += csv_number(*row.snr_oracle);
    line += ",";
    if (row.rel_err) line += csv_number(*row.rel_err);
    return line;
}

void write_text(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + out_path);
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + out_path);
}

void merge_overrides(ScenarioConfig& c, const CliOptions& o) {
    if (!o.out.empty()) c.out = o.out;
    if (o.tolerance) c.tolerance = o.tolerance;
    if (o.seed) c.seed = *o.seed;
}

int enforce_tolerance(const ScenarioConfig& c, const std::vector<ScenarioRow>& rows) {
    if (!c.tolerance) return 0;
    bool any_oracle = false;
    for (const auto& row : rows) {
        if (!row.rel_err) continue;
        any_oracle = true;
        if (*row.rel_err > *c.tolerance) {
            std::cerr << "error: " << row.scheme << " rel_err " << csv_number(*row.rel_err)
                      << " exceeds tolerance " << csv_number(*c.tolerance) << "\n";
            return 3;
        }
    }
    if (!any_oracle) {
        std::cerr << "error: tolerance given but no closed-form reference applies\n";
        return 2;
    }
    return 0;
}

int cmd_run(const CliOptions& options) {
    ScenarioConfig c = load_config(options.config_path);
    merge_overrides(c, options);
    const ScenarioRow row = evaluate_scenario(c);
    write_text(c.out, std::string(kCsvHeader) + "\n" + row_csv(row) + "\n");
    return enforce_tolerance(c, {row});
}

int cmd_sweep(const CliOptions& options) {
    ScenarioConfig c = load_config(options.config_path);
    merge_overrides(c, options);
    if (!c.sweep) throw ConfigError("sweep command needs a 'sweep' block");
    const SweepSpec sw = *c.sweep;

    std::vector<double> values(static_cast<std::size_t>(sw.steps));
    for (int k = 0; k < sw.steps; ++k)
        values[static_cast<std::size_t>(k)] =
            sw.steps == 1 ? sw.from : sw.from + (sw.to - sw.from) * k / (sw.steps - 1);

    std::vector<ScenarioRow> rows(values.size());
    const int threads = std::min<int>(resolve_threads(options.threads),
                                      static_cast<int>(values.size()));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    auto worker = [&](int tid) {
        try {
            for (std::size_t k = static_cast<std::size_t>(tid); k < values.size();
                 k += static_cast<std::size_t>(threads)) {
                ScenarioConfig point = c;
                apply_param(point, sw.parameter, values[k]);
                rows[k] = evaluate_scenario(point);
            }
        } catch (...) {
            errors[static_cast<std::size_t>(tid)] = std::current_exception();
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& t : pool) t.join();
    }
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    std::string csv = std::string(kCsvHeader) + ",swept_value\n";
    for (std::size_t k = 0; k < rows.size(); ++k)
        csv += row_csv(rows[k]) + "," + csv_number(values[k]) + "\n";
    write_text(c.out, csv);
    return enforce_tolerance(c, rows);
}

std::string sibling_path(const std::string& out, const char* suffix) {
    const std::filesystem::path p(out);
    return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

int cmd_jsf(const CliOptions& options) {
    ScenarioConfig c = load_config(options.config_path);
    merge_overrides(c, options);
    if (!c.jsf) throw ConfigError("jsf command needs a 'jsf' block");
    if (c.out.empty()) throw ConfigError("jsf command needs an output path ('out' or --out)");
    const JsfScenario& js = *c.jsf;

    StageSpec spec;
    if (js.binomial_stages > 0)
        for (double l : binomial_lengths(js.binomial_stages, js.binomial_l1))
            spec.gains.push_back(js.gain_scale * l);
    else
        spec.gains = js.gains;
    spec.beta = js.beta;
    spec.l_dm = js.l_dm;
    spec.sigma_p = js.sigma_p;
    for (const auto& w : stage_warnings(spec)) std::cerr << "warning: " << w << "\n";

    const auto s_axis = linear_axis(js.grid.min, js.grid.max, js.grid.points);
    const auto i_axis = s_axis;
    const MismatchModel model = js.mismatch ? MismatchModel(*js.mismatch) : Broadband{};
    auto ms = jsf_multistage(s_axis, i_axis, spec, model);

    JSFGrid grid = ms.grid;
    double kept = 1.0;
    if (js.filter) {
        const auto& box = *js.filter;
        kept = 0.0;
        for (Eigen::Index r = 0; r < grid.amp.rows(); ++r)
            for (Eigen::Index col = 0; col < grid.amp.cols(); ++col)
                if (grid.omega_s[static_cast<std::size_t>(r)] >= box[0] &&
                    grid.omega_s[static_cast<std::size_t>(r)] <= box[1] &&
                    grid.omega_i[static_cast<std::size_t>(col)] >= box[2] &&
                    grid.omega_i[static_cast<std::size_t>(col)] <= box[3])
                    kept += std::norm(grid.amp(r, col));
        kept *= grid.step_s() * grid.step_i();
        grid = filter_box(grid, box[0], box[1], box[2], box[3]);
    }
    const auto schmidt = schmidt_analysis(grid);

    std::string matrix;
    for (double oi : grid.omega_i) matrix += "," + csv_number(oi);
    matrix += "\n";
    for (Eigen::Index r = 0; r < grid.amp.rows(); ++r) {
        matrix += csv_number(grid.omega_s[static_cast<std::size_t>(r)]);
        for (Eigen::Index col = 0; col < grid.amp.cols(); ++col)
            matrix += "," + csv_number(std::norm(grid.amp(r, col)));
        matrix += "\n";
    }
    write_text(c.out, matrix);

    const auto marg_s = marginal_intensity(grid);
    std::string marginals = "axis,omega,intensity\n";
    for (std::size_t k = 0; k < marg_s.size(); ++k)
        marginals += "s," + csv_number(grid.omega_s[k]) + "," + csv_number(marg_s[k]) + "\n";
    for (Eigen::Index col = 0; col < grid.amp.cols(); ++col) {
        const double inten = grid.amp.col(col).squaredNorm() * grid.step_s();
        marginals += "i," + csv_number(grid.omega_i[static_cast<std::size_t>(col)]) + "," +
                     csv_number(inten) + "\n";
    }
    write_text(sibling_path(c.out, "_marginals"), marginals);

    std::cout << "jsf stages=" << spec.gains.size()
              << " schmidt_number=" << csv_number(schmidt.schmidt_number)
              << " rate_enhancement=" << csv_number(ms.rate_enhancement);
    if (js.filter) std::cout << " kept_fraction=" << csv_number(kept);
    std::cout << "\n";
    return 0;
}

int cmd_fringe(const CliOptions& options) {
    ScenarioConfig c = load_config(options.config_path);
    merge_overrides(c, options);
    if (c.scheme.empty()) throw ConfigError("fringe command needs a 'scheme'");
    const Scheme s = *parse_scheme(c.scheme);
    const OracleParams& p = c.params;

    CircuitBuilder over_phase;
    if (s == Scheme::MziClassical) {
        const double t1 = p.t1, t2 = p.t2, a = p.alpha;
        over_phase = [=](double phi) { return preset_mzi(t1, t2, phi, a); };
    } else if (s == Scheme::MziSqueezed) {
        const double t1 = p.t1, t2 = p.t2, a = p.alpha, gs = std::sinh(p.r);
        over_phase = [=](double phi) { return preset_mzi_squeezed(t1, t2, phi, a, gs, 0.0); };
    } else if (s == Scheme::PaBs) {
        const double g1 = p.g1, t = p.bs_t, a = p.alpha;
        over_phase = [=](double phi) { return preset_pa_bs(g1, t, a, M_PI, phi); };
    } else if (is_sui_family(s)) {
        SuiParams sp;
        sp.g1 = p.g1;
        sp.g2 = p.g2;
        sp.alpha = p.alpha;
        sp.phi1 = 0.0;
        sp.internal_loss = c.internal_loss;
        sp.dual_beam = is_dual(s);
        over_phase = [sp](double phi) {
            SuiParams q = sp;
            q.phi2 = phi;
            return preset_sui(q);
        };
    } else {
        throw ConfigError("scheme '" + c.scheme + "' has no fringe phase to scan");
    }
    over_phase = with_output_loss(over_phase, c.external_loss);

    std::vector<double> grid(static_cast<std::size_t>(c.fringe.points));
    for (int k = 0; k < c.fringe.points; ++k)
        grid[static_cast<std::size_t>(k)] =
            c.fringe.from + (c.fringe.to - c.fringe.from) * k / (c.fringe.points - 1);
    const auto table = fringe_scan(over_phase, grid);

    std::string csv = "phase,i1,i2,var1,var2\n";
    for (const auto& pt : table)
        csv += csv_number(pt.phase) + "," + csv_number(pt.i1) + "," + csv_number(pt.i2) + "," +
               csv_number(pt.var1) + "," + csv_number(pt.var2) + "\n";
    write_text(c.out, csv);
    return 0;
}

int cmd_selfcheck(const CliOptions& options) {
    ScenarioConfig manifest = load_config(options.config_path);
    if (manifest.suite.empty()) throw ConfigError("selfcheck needs a 'configs' list");
    const double default_tol =
        options.tolerance.value_or(manifest.suite_tolerance.value_or(1e-4));

    int failures = 0;
    std::ostringstream report;
    for (const std::string& path : manifest.suite) {
        ScenarioConfig sub = load_config(path);
        const double tol = sub.tolerance.value_or(default_tol);
        const ScenarioRow row = evaluate_scenario(sub);
        if (!row.rel_err)
            throw ConfigError(path + ": no closed-form reference applies to this scenario");
        const bool ok = *row.rel_err <= tol;
        if (!ok) ++failures;
        report << std::filesystem::path(path).filename().string() << ": scheme=" << row.scheme
               << " rel_err=" << csv_number(*row.rel_err) << " tolerance=" << csv_number(tol)
               << (ok ? " ok" : " FAIL") << "\n";
    }
    report << "selfcheck: " << manifest.suite.size() << " scenario(s), " << failures
           << " failure(s)\n";
    if (!options.out.empty())
        write_text(options.out, report.str());
    else
        std::cout << report.str();
    return failures > 0 ? 3 : 0;
}

}  // namespace

ScenarioRow evaluate_scenario(const ScenarioConfig& c) {
    if (c.scheme.empty()) throw ConfigError("scenario needs a 'scheme'");
    const auto parsed = parse_scheme(c.scheme);
    if (!parsed) throw ConfigError("unknown scheme '" + c.scheme + "'");
    const Scheme s = *parsed;
    if (c.internal_loss > 0.0 && !is_sui_family(s))
        throw ConfigError("internal_loss is only supported for the two-amplifier schemes");

    const SchemeRun runner = make_runner(s, c);
    ScenarioRow row;
    row.scheme = c.scheme;
    row.param_json = param_json_object(s, c).dump();
    row.report = snr(runner.builder, runner.meas, runner.probe, c.scheme);
    row.snr_oracle = scenario_oracle(s, c);
    if (row.snr_oracle)
        row.rel_err = std::abs(row.report.snr - *row.snr_oracle) / std::abs(*row.snr_oracle);
    return row;
}

std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int resolve_threads(int requested) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("SU11_NUM_THREADS")) {
            char* end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end != nullptr && *end == '\0' && v > 0 && v <= 1024) n = static_cast<int>(v);
        }
    }
    if (n <= 0) n = 1;
    return std::min(n, 64);
}

int run_cli(const CliOptions& options) {
    try {
        if (options.command == "run") return cmd_run(options);
        if (options.command == "sweep") return cmd_sweep(options);
        if (options.command == "jsf") return cmd_jsf(options);
        if (options.command == "fringe") return cmd_fringe(options);
        if (options.command == "selfcheck") return cmd_selfcheck(options);
        std::cerr << "error: unknown command '" << options.command << "'\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace su11
