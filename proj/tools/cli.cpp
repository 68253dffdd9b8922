#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "rql/bounds.hpp"
#include "rql/error.hpp"
#include "rql/extremal.hpp"
#include "rql/format.hpp"
#include "rql/gaussian.hpp"
#include "rql/grid_oracle.hpp"

namespace rql::cli {

using nlohmann::json;

namespace {

struct SystemArgs {
    std::string system = "free";
    double m = 1.0;
    double omega = 1.0;
    double hbar = 1.0;
};

void add_system_options(CLI::App *cmd, SystemArgs &a) {
    cmd->add_option("--system", a.system, "free | osc | osc-dimless")
        ->check(CLI::IsMember({"free", "osc", "osc-dimless"}))
        ->capture_default_str();
    cmd->add_option("--m", a.m, "mass")->capture_default_str();
    cmd->add_option("--omega", a.omega, "angular frequency")->capture_default_str();
    cmd->add_option("--hbar", a.hbar, "reduced Planck constant")->capture_default_str();
}

SystemModel make_model(const SystemArgs &a) {
    SystemModel model;
    if (a.system == "free") {
        model = FreeMass{a.m};
    } else if (a.system == "osc") {
        model = Oscillator{a.m, a.omega};
    } else {
        model = DimensionlessOscillator{a.omega};
    }
    validate_model(model);
    validate_config(PhysConfig{a.hbar});
    return model;
}

Sign parse_sign(const std::string &s) {
    if (s == "+" || s == "plus") {
        return Sign::Plus;
    }
    if (s == "-" || s == "minus") {
        return Sign::Minus;
    }
    throw InvalidArgument("--sign must be + or -");
}

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json state_json(const GaussianState &s) {
    return {{"mean_x", s.mean_x}, {"mean_p", s.mean_p}, {"vxx", s.vxx},
            {"vxp", s.vxp},       {"vpp", s.vpp}};
}

// Writes to --output when given, else to `out`.
class Sink {
  public:
    Sink(const std::string &path, std::ostream &fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw InvalidArgument("cannot open output file " + path);
            }
            stream_ = &file_;
        }
    }
    std::ostream &get() { return *stream_; }

  private:
    std::ofstream file_;
    std::ostream *stream_;
};

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
    SystemArgs sys;
    std::string variable = "x";
    double vxx0 = 0.0;
    double vpp0 = 0.0;
    double t_max = 0.0;
    int steps = 100;
    std::string output;
};

int cmd_bounds(const BoundsArgs &a, std::ostream &out) {
    const SystemModel model = make_model(a.sys);
    const PhysConfig c{a.sys.hbar};
    if (a.steps < 1) {
        throw InvalidArgument("--steps must be at least 1");
    }
    if (!std::isfinite(a.t_max) || a.t_max < 0.0) {
        throw InvalidArgument("--t-max must be finite and non-negative");
    }
    // Validates the uncertainty product before any output is written.
    correlation_root(a.vxx0, a.vpp0, effective_hbar(model, c));

    const bool free = std::holds_alternative<FreeMass>(model);
    Sink sink(a.output, out);
    auto &os = sink.get();
    os << "t,lower,upper,sql_line\n";
    for (int i = 0; i <= a.steps; ++i) {
        const double t = a.t_max * i / a.steps;
        const BoundPair b = a.variable == "x"
                                ? position_envelope(model, a.vxx0, a.vpp0, c, t)
                                : momentum_envelope(model, a.vxx0, a.vpp0, c, t);
        os << fmt17(t) << ',' << fmt17(b.lower) << ',' << fmt17(b.upper) << ',';
        if (free && a.variable == "x") {
            os << fmt17(sql_reference(std::get<FreeMass>(model).m, c.hbar, t));
        } else {
            os << "nan";
        }
        os << '\n';
    }
    return kOk;
}

// -------------------------------------------------------------- extremal

struct ExtremalArgs {
    SystemArgs sys;
    std::string sign = "+";
    double vxx0 = 0.0;
    double vpp0 = 0.0;
    double mean_x = 0.0;
    double mean_p = 0.0;
};

int cmd_extremal(const ExtremalArgs &a, std::ostream &out) {
    const SystemModel model = make_model(a.sys);
    const double hbar = effective_hbar(model, PhysConfig{a.sys.hbar});
    const Sign sign = parse_sign(a.sign);
    const ExtremalSpec spec = extremal_spec(a.vxx0, a.vpp0, hbar, sign);
    const GaussianState state = gaussian_from_extremal(spec, a.mean_x, a.mean_p, hbar);

    json j;
    j["system"] = a.sys.system;
    j["sign"] = sign == Sign::Plus ? "+" : "-";
    j["state"] = state_json(state);

    // Quadrature frame for the squeezed-state labels: the oscillator itself,
    // or a unit (m omega = 1) reference oscillator for the free mass.
    GaussianState quad = state;
    cplx eta = spec.param;
    if (const auto *f = std::get_if<FreeMass>(&model)) {
        j["parameter"] = {{"name", "lambda"}, {"value", complex_json(spec.param)}};
        j["horizon"] = {{"name", "t_M"},
                        {"value", t_contract_free(a.vxx0, a.vpp0, f->m, hbar)}};
        const double s = 1.0 / std::sqrt(hbar);
        quad = {state.mean_x * s, state.mean_p * s, state.vxx / hbar,
                state.vxp / hbar, state.vpp / hbar};
        eta = eta_from_lambda(spec.param, 1.0);
        j["squeeze_reference"] = "unit oscillator, m*omega = 1";
    } else if (const auto *o = std::get_if<Oscillator>(&model)) {
        const double mw = o->m * o->omega;
        const double xs = std::sqrt(mw / hbar);
        const double ps = 1.0 / std::sqrt(mw * hbar);
        quad = {state.mean_x * xs, state.mean_p * ps, state.vxx * xs * xs,
                state.vxp * xs * ps, state.vpp * ps * ps};
        eta = eta_from_lambda(spec.param, mw);
        j["parameter"] = {{"name", "lambda"}, {"value", complex_json(spec.param)}};
        const double phase = t_contract_osc(quad.vxx, quad.vpp);
        j["horizon"] = {{"name", "omega_t_M_prime"},
                        {"value", phase},
                        {"t_M_prime", phase / o->omega}};
        j["squeeze_reference"] = "oscillator quadratures";
    } else {
        j["parameter"] = {{"name", "eta"}, {"value", complex_json(spec.param)}};
        j["horizon"] = {{"name", "omega_t_M_prime"},
                        {"value", t_contract_osc(a.vxx0, a.vpp0)}};
        j["squeeze_reference"] = "oscillator quadratures";
    }
    const SqueezeParams sq = squeeze_from_gaussian(quad);
    j["squeeze"] = {{"eta", complex_json(eta)},
                    {"r", sq.r},
                    {"theta", sq.theta},
                    {"alpha", complex_json(sq.alpha)},
                    {"beta", complex_json(sq.beta())}};
    out << j.dump(2) << '\n';
    return kOk;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
    SystemArgs sys;
    std::string sign = "+";
    double vxx0 = 1.0;
    double vpp0 = 1.0;
    double mean_x = 0.0;
    double mean_p = 0.0;
    double t_max = -1.0;
    int times = 9;
    std::vector<double> t_list;
    std::size_t n = std::size_t{1} << 14;
    double domain_sigmas = 40.0;
    double tolerance = 1e-8;
    std::size_t osc_steps = 256;
    unsigned threads = 1;
    std::string csv;
};

int cmd_oracle(const OracleArgs &a, std::ostream &out) {
    const SystemModel model = make_model(a.sys);
    const PhysConfig c{a.sys.hbar};
    const double hbar = effective_hbar(model, c);
    const ExtremalSpec spec = extremal_spec(a.vxx0, a.vpp0, hbar, parse_sign(a.sign));

    std::vector<double> ts = a.t_list;
    if (ts.empty()) {
        double t_max = a.t_max;
        if (t_max < 0.0) {
            const double h = contraction_horizon(model, a.vxx0, a.vpp0, c);
            t_max = h > 0.0 ? 2.0 * h : 1.0;
        }
        if (a.times < 1) {
            throw InvalidArgument("--times must be at least 1");
        }
        for (int i = 0; i < a.times; ++i) {
            ts.push_back(a.times == 1 ? t_max : t_max * i / (a.times - 1));
        }
    }

    oracle::OracleOptions opt;
    opt.n = a.n;
    opt.domain_sigmas = a.domain_sigmas;
    opt.tolerance = a.tolerance;
    opt.osc_steps = a.osc_steps;
    opt.threads = std::max(1u, a.threads);
    oracle::validate_grid(oracle::Grid{-1.0, 1.0, opt.n});

    const auto rep = oracle::verify_bounds_oracle(spec, a.mean_x, a.mean_p,
                                                  model, c, ts, opt);
    out << "system: " << to_string(model) << '\n'
        << "points: " << rep.points.size() << '\n'
        << "max_dev_evolution: " << fmt17(rep.max_dev_evolution) << '\n'
        << "max_dev_saturation: " << fmt17(rep.max_dev_saturation) << '\n'
        << "min_sandwich_slack: " << fmt17(rep.min_sandwich_slack) << '\n'
        << "tolerance: " << fmt17(opt.tolerance) << '\n';
    for (const auto &d : rep.diagnostics) {
        out << "diagnostic: " << d << '\n';
    }
    out << "status: " << (rep.passed ? "PASS" : "FAIL") << '\n';

    if (!a.csv.empty()) {
        Sink sink(a.csv, out);
        auto &os = sink.get();
        os << "t,vxx_oracle,vxp_oracle,vpp_oracle,vxx_expected,vxp_expected,"
              "vpp_expected,lower,upper,dev_evolution,dev_saturation\n";
        for (const auto &p : rep.points) {
            os << fmt17(p.t) << ',' << fmt17(p.oracle.vxx) << ','
               << fmt17(p.oracle.vxp) << ',' << fmt17(p.oracle.vpp) << ','
               << fmt17(p.expected.vxx) << ',' << fmt17(p.expected.vxp) << ','
               << fmt17(p.expected.vpp) << ',' << fmt17(p.envelope.lower) << ','
               << fmt17(p.envelope.upper) << ',' << fmt17(p.dev_evolution) << ','
               << fmt17(p.dev_saturation) << '\n';
        }
    }
    return rep.passed ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------- wavefn

struct WavefnArgs {
    SystemArgs sys;
    std::string sign = "+";
    double vxx0 = 1.0;
    double vpp0 = 1.0;
    double mean_x = 0.0;
    double mean_p = 0.0;
    double t = 0.0;
    std::size_t n = 4096;
    double domain_sigmas = 40.0;
    std::size_t osc_steps = 1024;
    std::string output;
};

int cmd_wavefn(const WavefnArgs &a, std::ostream &out) {
    const SystemModel model = make_model(a.sys);
    const PhysConfig c{a.sys.hbar};
    const double hbar = effective_hbar(model, c);
    if (!std::isfinite(a.t) || a.t < 0.0) {
        throw InvalidArgument("--t must be finite and non-negative");
    }
    const ExtremalSpec spec = extremal_spec(a.vxx0, a.vpp0, hbar, parse_sign(a.sign));
    const GaussianState s0 = gaussian_from_extremal(spec, a.mean_x, a.mean_p, hbar);
    const oracle::Grid g = oracle::suggest_grid(s0, model, a.t, a.n, a.domain_sigmas);
    oracle::WaveFn psi = oracle::sample_extremal(spec, a.mean_x, a.mean_p, g, hbar);
    if (a.t > 0.0) {
        if (const auto *f = std::get_if<FreeMass>(&model)) {
            psi = oracle::propagate_free(psi, f->m, a.t);
        } else if (const auto *o = std::get_if<Oscillator>(&model)) {
            psi = oracle::propagate_osc(psi, o->m, o->omega, a.t, a.osc_steps,
                                       oracle::Splitting::Yoshida4);
        } else {
            const double w = std::get<DimensionlessOscillator>(model).omega;
            if (w == 0.0) {
                throw InvalidArgument("osc-dimless needs omega > 0 to propagate");
            }
            psi = oracle::propagate_osc(psi, 1.0 / w, w, a.t, a.osc_steps,
                                       oracle::Splitting::Yoshida4);
        }
    }
    Sink sink(a.output, out);
    oracle::write_csv(psi, sink.get());
    return kOk;
}

// ----------------------------------------------------------------- ozawa

const json *child(const json &j, const std::string &key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

void reject_unknown(const json &j, const std::string &path,
                    const std::set<std::string> &allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.contains(it.key())) {
            throw ConfigError(path.empty() ? it.key() : path + "." + it.key(),
                              "unknown field");
        }
    }
}

std::optional<double> number(const json &j, const std::string &key,
                             const std::string &path, bool required) {
    const json *v = child(j, key);
    const std::string name = path.empty() ? key : path + "." + key;
    if (v == nullptr) {
        if (required) {
            throw ConfigError(name, "required field is missing");
        }
        return std::nullopt;
    }
    if (!v->is_number()) {
        throw ConfigError(name, "must be a number");
    }
    return v->get<double>();
}

double positive(const json &j, const std::string &key, const std::string &path,
                std::optional<double> fallback = std::nullopt) {
    auto v = number(j, key, path, !fallback.has_value());
    const double x = v.value_or(*fallback);
    if (!std::isfinite(x) || !(x > 0.0)) {
        throw ConfigError(path.empty() ? key : path + "." + key,
                          "must be a positive number");
    }
    return x;
}

const json &object(const json &j, const std::string &key, const std::string &path) {
    const json *v = child(j, key);
    const std::string name = path.empty() ? key : path + "." + key;
    if (v == nullptr) {
        throw ConfigError(name, "required field is missing");
    }
    if (!v->is_object()) {
        throw ConfigError(name, "must be an object");
    }
    return *v;
}

std::string string_field(const json &j, const std::string &key,
                         const std::set<std::string> &choices,
                         const std::string &fallback) {
    const json *v = child(j, key);
    if (v == nullptr) {
        return fallback;
    }
    if (!v->is_string() || !choices.contains(v->get<std::string>())) {
        std::string list;
        for (const auto &c : choices) {
            list += (list.empty() ? "" : " | ") + c;
        }
        throw ConfigError(key, "must be one of " + list);
    }
    return v->get<std::string>();
}

} // namespace

ozawa::OzawaConfig parse_ozawa_config(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("<root>", "config must be a JSON object");
    }
    reject_unknown(j, "",
                   {"schema_version", "hbar", "system", "initial_state", "meter",
                    "k", "tau", "schedule", "T", "N", "Omega", "delta_tau",
                    "readout", "seed"});
    const json *ver = child(j, "schema_version");
    if (ver == nullptr) {
        throw ConfigError("schema_version", "required field is missing");
    }
    if (!ver->is_number_integer() || ver->get<int>() != kOzawaSchemaVersion) {
        throw ConfigError("schema_version",
                          "unsupported version (expected " +
                              std::to_string(kOzawaSchemaVersion) + ")");
    }

    ozawa::OzawaConfig cfg;
    cfg.phys.hbar = positive(j, "hbar", "", 1.0);

    const json &sys = object(j, "system", "");
    const json *model = child(sys, "model");
    if (model == nullptr || !model->is_string()) {
        throw ConfigError("system.model", "must be \"free\", \"osc\" or \"osc-dimless\"");
    }
    const std::string kind = model->get<std::string>();
    if (kind == "free") {
        reject_unknown(sys, "system", {"model", "m"});
        cfg.system = FreeMass{positive(sys, "m", "system")};
    } else if (kind == "osc") {
        reject_unknown(sys, "system", {"model", "m", "omega"});
        cfg.system = Oscillator{positive(sys, "m", "system"),
                                positive(sys, "omega", "system")};
    } else if (kind == "osc-dimless") {
        reject_unknown(sys, "system", {"model", "omega"});
        cfg.system = DimensionlessOscillator{positive(sys, "omega", "system")};
    } else {
        throw ConfigError("system.model", "must be \"free\", \"osc\" or \"osc-dimless\"");
    }

    if (child(j, "initial_state") != nullptr) {
        const json &s = object(j, "initial_state", "");
        reject_unknown(s, "initial_state", {"mean_x", "mean_p", "vxx", "vxp", "vpp"});
        GaussianState st;
        st.mean_x = number(s, "mean_x", "initial_state", false).value_or(0.0);
        st.mean_p = number(s, "mean_p", "initial_state", false).value_or(0.0);
        st.vxx = positive(s, "vxx", "initial_state");
        st.vpp = positive(s, "vpp", "initial_state");
        st.vxp = number(s, "vxp", "initial_state", false).value_or(0.0);
        cfg.initial_state = st;
    }

    const json &meter = object(j, "meter", "");
    reject_unknown(meter, "meter", {"vyy0", "vpp_y0"});
    cfg.vyy0 = positive(meter, "vyy0", "meter");
    cfg.vpp_y0 = positive(meter, "vpp_y0", "meter");

    cfg.tau = positive(j, "tau", "");
    cfg.k = positive(j, "k", "", ozawa::kIdealPhase / cfg.tau);

    const std::string schedule = string_field(j, "schedule", {"auto", "manual"}, "auto");
    cfg.schedule = schedule == "auto" ? ozawa::Schedule::Auto : ozawa::Schedule::Manual;
    if (cfg.schedule == ozawa::Schedule::Manual) {
        cfg.T = positive(j, "T", "");
    } else if (child(j, "T") != nullptr) {
        throw ConfigError("T", "only allowed with \"schedule\": \"manual\"");
    }

    const json *n = child(j, "N");
    if (n == nullptr) {
        throw ConfigError("N", "required field is missing");
    }
    if (!n->is_number_integer() || n->get<long long>() < 1 ||
        n->get<long long>() > 1000000) {
        throw ConfigError("N", "must be an integer in [1, 1000000]");
    }
    cfg.N = n->get<int>();

    cfg.Omega = number(j, "Omega", "", false).value_or(0.0);
    if (!std::isfinite(cfg.Omega) || cfg.Omega < 0.0) {
        throw ConfigError("Omega", "must be a non-negative number");
    }
    cfg.delta_tau = number(j, "delta_tau", "", false).value_or(0.0);
    if (!std::isfinite(cfg.delta_tau) || cfg.delta_tau < 0.0) {
        throw ConfigError("delta_tau", "must be a non-negative number");
    }
    const std::string readout = string_field(j, "readout", {"mean", "sample"}, "mean");
    cfg.readout = readout == "mean" ? ozawa::Readout::Mean : ozawa::Readout::Sample;

    if (const json *seed = child(j, "seed")) {
        if (!seed->is_number_unsigned()) {
            throw ConfigError("seed", "must be a non-negative integer");
        }
        cfg.seed = seed->get<std::uint64_t>();
    }
    return cfg;
}

namespace {

int cmd_ozawa(const std::string &path, bool strict, const std::string &output,
              std::ostream &out, std::ostream &err) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("<file>", "cannot read " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
    }
    ozawa::OzawaConfig cfg = parse_ozawa_config(j);
    cfg.strict = strict;

    ozawa::ProtocolTrace trace;
    try {
        trace = ozawa::run_protocol(cfg);
    } catch (const ozawa::RegimeViolation &) {
        for (const auto &w : ozawa::check_regime(cfg)) {
            err << "warning [" << w.code << "]: " << w.message << '\n';
        }
        err << "error: regime warnings are fatal under --strict\n";
        return kVerificationFailed;
    }
    for (const auto &w : trace.warnings) {
        err << "warning [" << w.code << "]: " << w.message << '\n';
    }
    Sink sink(output, out);
    ozawa::write_trace_csv(trace, sink.get());
    return kOk;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Rigorous quantum limits on free-mass and oscillator monitoring"};
    app.require_subcommand(1);

    BoundsArgs bounds;
    auto *b = app.add_subcommand("bounds", "envelope CSV: t,lower,upper,sql_line");
    add_system_options(b, bounds.sys);
    b->add_option("--variable", bounds.variable, "x (position) or p (momentum)")
        ->check(CLI::IsMember({"x", "p"}))
        ->capture_default_str();
    b->add_option("--vxx0", bounds.vxx0, "initial position variance")->required();
    b->add_option("--vpp0", bounds.vpp0, "initial momentum variance")->required();
    b->add_option("--t-max", bounds.t_max, "last time")->required();
    b->add_option("--steps", bounds.steps, "number of intervals")->capture_default_str();
    b->add_option("--output", bounds.output, "CSV path (default stdout)");

    ExtremalArgs ext;
    auto *e = app.add_subcommand("extremal", "saturating state as JSON");
    add_system_options(e, ext.sys);
    e->add_option("--sign", ext.sign, "+ (contractive) or - (expanding)")->capture_default_str();
    e->add_option("--vxx0", ext.vxx0, "initial position variance")->required();
    e->add_option("--vpp0", ext.vpp0, "initial momentum variance")->required();
    e->add_option("--mean-x", ext.mean_x)->capture_default_str();
    e->add_option("--mean-p", ext.mean_p)->capture_default_str();

    OracleArgs orc;
    auto *o = app.add_subcommand("oracle", "grid wavefunction cross-check");
    add_system_options(o, orc.sys);
    o->add_option("--sign", orc.sign)->capture_default_str();
    o->add_option("--vxx0", orc.vxx0)->capture_default_str();
    o->add_option("--vpp0", orc.vpp0)->capture_default_str();
    o->add_option("--mean-x", orc.mean_x)->capture_default_str();
    o->add_option("--mean-p", orc.mean_p)->capture_default_str();
    o->add_option("--t-max", orc.t_max, "default: twice the contraction horizon");
    o->add_option("--times", orc.times, "points in [0, t-max]")->capture_default_str();
    o->add_option("--t", orc.t_list, "explicit times (overrides --times)");
    o->add_option("--n", orc.n, "grid points (power of two)")->capture_default_str();
    o->add_option("--domain-sigmas", orc.domain_sigmas)->capture_default_str();
    o->add_option("--tolerance", orc.tolerance)->capture_default_str();
    o->add_option("--osc-steps", orc.osc_steps)->capture_default_str();
    o->add_option("--threads", orc.threads)->capture_default_str();
    o->add_option("--csv", orc.csv, "per-point CSV path");

    WavefnArgs wf;
    auto *w = app.add_subcommand("wavefn", "sampled extremal wavefunction as CSV");
    add_system_options(w, wf.sys);
    w->add_option("--sign", wf.sign)->capture_default_str();
    w->add_option("--vxx0", wf.vxx0)->capture_default_str();
    w->add_option("--vpp0", wf.vpp0)->capture_default_str();
    w->add_option("--mean-x", wf.mean_x)->capture_default_str();
    w->add_option("--mean-p", wf.mean_p)->capture_default_str();
    w->add_option("--t", wf.t, "propagation time")->capture_default_str();
    w->add_option("--n", wf.n)->capture_default_str();
    w->add_option("--domain-sigmas", wf.domain_sigmas)->capture_default_str();
    w->add_option("--osc-steps", wf.osc_steps)->capture_default_str();
    w->add_option("--output", wf.output, "CSV path (default stdout)");

    std::string config;
    bool strict = false;
    std::string trace_out;
    auto *z = app.add_subcommand("ozawa", "repeated-measurement protocol trace CSV");
    z->add_option("--config", config, "JSON config path")->required();
    z->add_flag("--strict", strict, "regime warnings become failures");
    z->add_option("--output", trace_out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return kOk;
    } catch (const CLI::ParseError &ex) {
        err << "error: " << ex.what() << '\n';
        return kUsageError;
    }

    try {
        if (b->parsed()) {
            return cmd_bounds(bounds, out);
        }
        if (e->parsed()) {
            return cmd_extremal(ext, out);
        }
        if (o->parsed()) {
            return cmd_oracle(orc, out);
        }
        if (w->parsed()) {
            return cmd_wavefn(wf, out);
        }
        return cmd_ozawa(config, strict, trace_out, out, err);
    } catch (const ConfigError &ex) {
        err << "error: " << ex.what() << '\n';
        return kUsageError;
    } catch (const InvalidArgument &ex) {
        err << "error: " << ex.what() << '\n';
        return kUsageError;
    } catch (const OracleError &ex) {
        err << "error: " << ex.what() << '\n';
        return kVerificationFailed;
    }
}

} // namespace rql::cli
