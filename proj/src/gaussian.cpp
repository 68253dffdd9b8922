#include "rql/gaussian.hpp"

#include <cmath>
#include <sstream>

#include "rql/error.hpp"

namespace rql {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

GaussianState GaussianState::from_moments(const Eigen::Vector2d &mean,
                                          const Eigen::Matrix2d &cov) {
    GaussianState s;
    s.mean_x = mean(0);
    s.mean_p = mean(1);
    s.vxx = cov(0, 0);
    s.vxp = 0.5 * (cov(0, 1) + cov(1, 0));
    s.vpp = cov(1, 1);
    return s;
}

double effective_hbar(const SystemModel &model, const PhysConfig &c) {
    return std::holds_alternative<DimensionlessOscillator>(model) ? 1.0
                                                                  : c.hbar;
}

void validate_config(const PhysConfig &c) {
    if (!positive_finite(c.hbar)) {
        throw InvalidArgument("hbar must be positive and finite");
    }
}

void validate_model(const SystemModel &model) {
    std::visit(overloaded{
                   [](const FreeMass &f) {
                       if (!positive_finite(f.m)) {
                           throw InvalidArgument("mass m must be positive");
                       }
                   },
                   [](const Oscillator &o) {
                       if (!positive_finite(o.m)) {
                           throw InvalidArgument("mass m must be positive");
                       }
                       if (!positive_finite(o.omega)) {
                           throw InvalidArgument(
                               "oscillator omega must be positive");
                       }
                   },
                   [](const DimensionlessOscillator &o) {
                       if (!std::isfinite(o.omega) || o.omega < 0.0) {
                           throw InvalidArgument(
                               "dimensionless omega must be non-negative");
                       }
                   },
               },
               model);
}

ValidationReport validate_state(const GaussianState &s, const PhysConfig &c) {
    ValidationReport r;
    const double h2 = c.hbar * c.hbar;
    r.margin = s.vxx * s.vpp - s.vxp * s.vxp - 0.25 * h2;

    std::ostringstream msg;
    msg.precision(17);
    if (!std::isfinite(s.mean_x) || !std::isfinite(s.mean_p) ||
        !std::isfinite(s.vxx) || !std::isfinite(s.vpp) ||
        !std::isfinite(s.vxp)) {
        r.ok = false;
        msg << "state has non-finite moments";
    } else if (!(s.vxx > 0.0)) {
        r.ok = false;
        msg << "vxx > 0 violated (vxx = " << s.vxx << ")";
    } else if (!(s.vpp > 0.0)) {
        r.ok = false;
        msg << "vpp > 0 violated (vpp = " << s.vpp << ")";
    } else if (r.margin < -kUncertaintyTolerance * h2) {
        r.ok = false;
        msg << "vxx*vpp - vxp^2 >= hbar^2/4 violated (margin = " << r.margin
            << ")";
    }
    r.message = msg.str();
    return r;
}

void require_valid(const GaussianState &s, const PhysConfig &c) {
    validate_config(c);
    auto r = validate_state(s, c);
    if (!r.ok) {
        throw InvalidArgument("invalid Gaussian state: " + r.message);
    }
}

SymplecticMap flow_map(const SystemModel &model, double t) {
    validate_model(model);
    if (!std::isfinite(t)) {
        throw InvalidArgument("time must be finite");
    }
    SymplecticMap m;
    std::visit(overloaded{
                   [&](const FreeMass &f) { m << 1.0, t / f.m, 0.0, 1.0; },
                   [&](const Oscillator &o) {
                       const double c = std::cos(o.omega * t);
                       const double s = std::sin(o.omega * t);
                       const double mw = o.m * o.omega;
                       m << c, s / mw, -mw * s, c;
                   },
                   [&](const DimensionlessOscillator &o) {
                       const double c = std::cos(o.omega * t);
                       const double s = std::sin(o.omega * t);
                       m << c, s, -s, c;
                   },
               },
               model);
    return m;
}

GaussianState evolve(const GaussianState &s, const SystemModel &model,
                     double t, const PhysConfig &c) {
    require_valid(s, PhysConfig{effective_hbar(model, c)});
    const SymplecticMap m = flow_map(model, t);
    const Eigen::Matrix2d v = m * s.covariance() * m.transpose();
    return GaussianState::from_moments(m * s.mean(), v);
}

double variance_x_closed_form(const GaussianState &s, const SystemModel &model,
                              double t, const PhysConfig &c) {
    require_valid(s, PhysConfig{effective_hbar(model, c)});
    validate_model(model);
    return std::visit(
        overloaded{
            [&](const FreeMass &f) {
                const double r = t / f.m;
                return s.vxx + 2.0 * r * s.vxp + r * r * s.vpp;
            },
            [&](const Oscillator &o) {
                const double ph = o.omega * t;
                const double mw = o.m * o.omega;
                const double cs = std::cos(ph);
                const double sn = std::sin(ph);
                return cs * cs * s.vxx + sn * sn * s.vpp / (mw * mw) +
                       std::sin(2.0 * ph) * s.vxp / mw;
            },
            [&](const DimensionlessOscillator &o) {
                const double ph = o.omega * t;
                const double cs = std::cos(ph);
                const double sn = std::sin(ph);
                return cs * cs * s.vxx + sn * sn * s.vpp +
                       std::sin(2.0 * ph) * s.vxp;
            },
        },
        model);
}

std::string to_string(const SystemModel &model) {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const FreeMass &f) { os << "FreeMass(m=" << f.m << ")"; },
                   [&](const Oscillator &o) {
                       os << "Oscillator(m=" << o.m << ", omega=" << o.omega
                          << ")";
                   },
                   [&](const DimensionlessOscillator &o) {
                       os << "DimensionlessOscillator(omega=" << o.omega << ")";
                   },
               },
               model);
    return os.str();
}

} // namespace rql
