#include "rql/ozawa.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "rql/bounds.hpp"
#include "rql/error.hpp"
#include "rql/extremal.hpp"
#include "rql/format.hpp"

namespace rql::ozawa {

namespace {

// Position block generator; the momentum block is -A^T.
Eigen::Matrix2d position_generator() {
    Eigen::Matrix2d a;
    a << 1.0, -2.0, 2.0, -1.0;
    return a;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

TwoModeGaussian TwoModeGaussian::product(const GaussianState &system,
                                         const GaussianState &meter) {
    TwoModeGaussian j;
    j.mean << system.mean_x, system.mean_p, meter.mean_x, meter.mean_p;
    j.cov.setZero();
    j.cov.topLeftCorner<2, 2>() = system.covariance();
    j.cov.bottomRightCorner<2, 2>() = meter.covariance();
    return j;
}

GaussianState TwoModeGaussian::system() const {
    return GaussianState::from_moments(mean.head<2>(), cov.topLeftCorner<2, 2>());
}

GaussianState TwoModeGaussian::meter() const {
    return GaussianState::from_moments(mean.tail<2>(),
                                       cov.bottomRightCorner<2, 2>());
}

Eigen::Matrix4d ozawa_generator(double k) {
    if (!std::isfinite(k)) {
        throw InvalidArgument("coupling k must be finite");
    }
    // Hamilton's equations of H: dx/dt = k(x - 2y), dy/dt = k(2x - y),
    // dp_x/dt = -k(p_x + 2 p_y), dp_y/dt = k(2 p_x + p_y).
    Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
    g(0, 0) = k;
    g(0, 2) = -2.0 * k;
    g(2, 0) = 2.0 * k;
    g(2, 2) = -k;
    g(1, 1) = -k;
    g(1, 3) = -2.0 * k;
    g(3, 1) = 2.0 * k;
    g(3, 3) = k;
    return g;
}

Eigen::Matrix4d ozawa_map(double k, double tau) {
    if (!std::isfinite(k) || !std::isfinite(tau)) {
        throw InvalidArgument("coupling k and duration tau must be finite");
    }
    const double phase = std::sqrt(3.0) * k * tau;
    const double c = std::cos(phase);
    const double s = std::sin(phase) / std::sqrt(3.0);
    const Eigen::Matrix2d a = position_generator();
    const Eigen::Matrix2d pos = c * Eigen::Matrix2d::Identity() + s * a;
    const Eigen::Matrix2d mom = c * Eigen::Matrix2d::Identity() - s * a.transpose();

    // Scatter the (x, y) and (p_x, p_y) blocks into (x, p_x, y, p_y).
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    for (int r = 0; r < 2; ++r) {
        for (int col = 0; col < 2; ++col) {
            m(2 * r, 2 * col) = pos(r, col);
            m(2 * r + 1, 2 * col + 1) = mom(r, col);
        }
    }
    return m;
}

Eigen::Matrix4d symplectic_form() {
    Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
    j(0, 1) = 1.0;
    j(1, 0) = -1.0;
    j(2, 3) = 1.0;
    j(3, 2) = -1.0;
    return j;
}

GaussianState prepare_meter(double vyy0, double vpp_y0, double hbar) {
    return gaussian_from_extremal(extremal_spec(vyy0, vpp_y0, hbar, Sign::Plus),
                                  0.0, 0.0, hbar);
}

TwoModeGaussian couple(const GaussianState &system, const GaussianState &meter,
                       double k, double tau, const PhysConfig &c) {
    require_valid(system, c);
    require_valid(meter, c);
    const Eigen::Matrix4d m = ozawa_map(k, tau);
    TwoModeGaussian j = TwoModeGaussian::product(system, meter);
    j.mean = m * j.mean;
    j.cov = m * j.cov * m.transpose();
    j.cov = 0.5 * (j.cov + j.cov.transpose()).eval();
    return j;
}

GaussianState meter_marginal(const TwoModeGaussian &j) { return j.meter(); }

GaussianState read_meter(const TwoModeGaussian &j, double y_reading) {
    if (!std::isfinite(y_reading)) {
        throw InvalidArgument("meter reading must be finite");
    }
    const double vyy = j.cov(2, 2);
    if (!(vyy > 0.0)) {
        throw InvalidArgument("meter position variance must be positive");
    }
    const Eigen::Vector2d cross = j.cov.block<2, 1>(0, 2);
    const Eigen::Vector2d mean =
        j.mean.head<2>() + cross * ((y_reading - j.mean(2)) / vyy);
    const Eigen::Matrix2d cov =
        j.cov.topLeftCorner<2, 2>() - cross * cross.transpose() / vyy;
    return GaussianState::from_moments(mean, cov);
}

void validate(const OzawaConfig &cfg) {
    validate_config(cfg.phys);
    validate_model(cfg.system);
    auto positive = [](double v, const char *name) {
        if (!std::isfinite(v) || !(v > 0.0)) {
            throw InvalidArgument(std::string(name) + " must be positive");
        }
    };
    auto non_negative = [](double v, const char *name) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidArgument(std::string(name) + " must be non-negative");
        }
    };
    positive(cfg.k, "k");
    positive(cfg.tau, "tau");
    non_negative(cfg.Omega, "Omega");
    non_negative(cfg.delta_tau, "delta_tau");
    if (cfg.N < 1) {
        throw InvalidArgument("N must be at least 1");
    }
    const double hbar = effective_hbar(cfg.system, cfg.phys);
    correlation_root(cfg.vyy0, cfg.vpp_y0, hbar);
    if (cfg.initial_state) {
        require_valid(*cfg.initial_state, PhysConfig{hbar});
    }
    if (cfg.schedule == Schedule::Manual) {
        positive(cfg.T, "T");
        if (!(cfg.tau < cfg.T)) {
            throw InvalidArgument("tau must be shorter than the period T");
        }
    } else if (std::holds_alternative<DimensionlessOscillator>(cfg.system) &&
               std::get<DimensionlessOscillator>(cfg.system).omega == 0.0) {
        throw InvalidArgument(
            "auto schedule needs a non-zero oscillator frequency");
    }
}

double measurement_period(const OzawaConfig &cfg) {
    validate(cfg);
    if (cfg.schedule == Schedule::Manual) {
        return cfg.T;
    }
    return cfg.tau +
           contraction_horizon(cfg.system, cfg.vyy0, cfg.vpp_y0,
                               PhysConfig{effective_hbar(cfg.system, cfg.phys)});
}

std::vector<RegimeWarning> check_regime(const OzawaConfig &cfg) {
    validate(cfg);
    std::vector<RegimeWarning> out;

    const double jitter = cfg.delta_tau * cfg.k;
    if (jitter > 0.1) {
        out.push_back({"timing-jitter",
                       "timing jitter not negligible: delta_tau * k = " +
                           num(jitter) + " > 0.1"});
    }
    const double phase_err = std::abs(cfg.k * cfg.tau / kIdealPhase - 1.0);
    if (phase_err > 1e-9) {
        out.push_back({"coupling-phase",
                       "k * tau deviates from pi/(3 sqrt(3)) by relative " +
                           num(phase_err) + " > 1e-9"});
    }

    double omega_eff = 0.0;
    if (const auto *f = std::get_if<FreeMass>(&cfg.system)) {
        omega_eff = std::sqrt(cfg.vpp_y0 / cfg.vyy0) / f->m;
        if (cfg.initial_state) {
            const auto &s = *cfg.initial_state;
            omega_eff = std::max(omega_eff, std::sqrt(s.vpp / s.vxx) / f->m);
        }
    } else if (const auto *o = std::get_if<Oscillator>(&cfg.system)) {
        omega_eff = o->omega;
    } else {
        omega_eff = std::get<DimensionlessOscillator>(cfg.system).omega;
    }
    const double drift = cfg.tau * std::max(cfg.Omega, omega_eff);
    if (drift > 0.1) {
        out.push_back({"free-hamiltonian",
                       "free Hamiltonian non-negligible during measurement: "
                       "tau * max(Omega, omega) = " +
                           num(drift) + " > 0.1"});
    }
    return out;
}

ProtocolTrace run_protocol(const OzawaConfig &cfg) {
    ProtocolTrace trace;
    trace.warnings = check_regime(cfg);
    if (cfg.strict && !trace.warnings.empty()) {
        throw RegimeViolation("regime check failed: " +
                              trace.warnings.front().message);
    }
    const double hbar = effective_hbar(cfg.system, cfg.phys);
    const PhysConfig phys{hbar};
    const GaussianState meter = prepare_meter(cfg.vyy0, cfg.vpp_y0, hbar);
    GaussianState system = cfg.initial_state.value_or(meter);
    trace.period = measurement_period(cfg);
    const double free_time = trace.period - cfg.tau;
    const bool ideal = std::abs(cfg.k * cfg.tau / kIdealPhase - 1.0) <= 1e-9;

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    for (int i = 0; i < cfg.N; ++i) {
        MeasurementRecord rec;
        rec.index = i + 1;
        rec.t = i * trace.period;
        rec.pre = system;

        const TwoModeGaussian joint = couple(system, meter, cfg.k, cfg.tau, phys);
        const GaussianState marginal = meter_marginal(joint);
        rec.vyy_meter = marginal.vxx;
        if (ideal && std::abs(marginal.vxx - system.vxx) > 1e-10 * system.vxx) {
            throw std::logic_error("meter variance transfer failed at step " +
                                   std::to_string(rec.index));
        }

        rec.y_reading = marginal.mean_x;
        if (cfg.readout == Readout::Sample) {
            rec.y_reading += std::sqrt(marginal.vxx) * normal(rng);
        }
        rec.post = read_meter(joint, rec.y_reading);
        trace.records.push_back(rec);

        if (i + 1 < cfg.N) {
            system = evolve(rec.post, cfg.system, free_time, phys);
        }
    }
    return trace;
}

void write_trace_csv(const ProtocolTrace &trace, std::ostream &out) {
    out << "i,t,y_reading,vxx_pre,vxp_pre,vpp_pre,vxx_post,vxp_post,vpp_post,"
           "vyy_meter\n";
    for (const auto &r : trace.records) {
        out << r.index << ',' << fmt17(r.t) << ',' << fmt17(r.y_reading) << ','
            << fmt17(r.pre.vxx) << ',' << fmt17(r.pre.vxp) << ','
            << fmt17(r.pre.vpp) << ',' << fmt17(r.post.vxx) << ','
            << fmt17(r.post.vxp) << ',' << fmt17(r.post.vpp) << ','
            << fmt17(r.vyy_meter) << '\n';
    }
}

} // namespace rql::ozawa
