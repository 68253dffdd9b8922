#include "rql/bounds.hpp"

#include <cmath>
#include <string>

#include "rql/error.hpp"

namespace rql {

namespace {

void check_variances(double vxx0, double vpp0) {
    if (!std::isfinite(vxx0) || !(vxx0 > 0.0)) {
        throw InvalidArgument("vxx0 must be positive");
    }
    if (!std::isfinite(vpp0) || !(vpp0 > 0.0)) {
        throw InvalidArgument("vpp0 must be positive");
    }
}

void check_positive(double v, const char *name) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw InvalidArgument(std::string(name) + " must be positive");
    }
}

void check_time(double t) {
    if (!std::isfinite(t) || t < 0.0) {
        throw InvalidArgument("time must be finite and non-negative");
    }
}

} // namespace

double correlation_root(double vxx0, double vpp0, double hbar) {
    check_variances(vxx0, vpp0);
    check_positive(hbar, "hbar");
    const double h2 = hbar * hbar;
    const double arg = 4.0 * vxx0 * vpp0 - h2;
    if (arg < 0.0) {
        if (arg < -4.0 * kUncertaintyTolerance * h2) {
            throw InvalidArgument(
                "uncertainty product vxx0*vpp0 below hbar^2/4");
        }
        return 0.0;
    }
    return std::sqrt(arg);
}

BoundPair rql_free(double vxx0, double vpp0, double m, double hbar, double t) {
    const double root = correlation_root(vxx0, vpp0, hbar);
    check_positive(m, "m");
    check_time(t);
    const double r = t / m;
    const double centre = vxx0 + r * r * vpp0;
    BoundPair b{t, centre - r * root, centre + r * root};
    // Analytically lower >= hbar^2/(4 vpp0) > 0.
    if (b.lower < 0.0) {
        throw InvalidArgument("negative lower envelope (numerical breakdown)");
    }
    return b;
}

AltForms rql_free_alt_forms(double vxx0, double vpp0, double m, double hbar,
                            double t) {
    const double root = correlation_root(vxx0, vpp0, hbar);
    check_positive(m, "m");
    check_time(t);
    const double sx = std::sqrt(vxx0);
    const double sp = std::sqrt(vpp0);
    const double t_m = m * root / vpp0;

    AltForms f;
    const double a = hbar / (2.0 * sp);
    const double b = (sp / m) * (t - 0.5 * t_m);
    f.vertex_form = a * a + b * b;
    const double d = t * sp / m - sx;
    f.product_form = (t / m) * (2.0 * sx * sp - root) + d * d;
    return f;
}

double t_contract_free(double vxx0, double vpp0, double m, double hbar) {
    const double root = correlation_root(vxx0, vpp0, hbar);
    check_positive(m, "m");
    return m * root / vpp0;
}

BoundPair rql_osc_x(double vxx0, double vpp0, double phase) {
    const double root = correlation_root(vxx0, vpp0, 1.0);
    if (!std::isfinite(phase)) {
        throw InvalidArgument("phase must be finite");
    }
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    const double centre = c * c * vxx0 + s * s * vpp0;
    const double half = 0.5 * std::abs(std::sin(2.0 * phase)) * root;
    return {phase, centre - half, centre + half};
}

BoundPair rql_osc_p(double vxx0, double vpp0, double phase) {
    const double root = correlation_root(vxx0, vpp0, 1.0);
    if (!std::isfinite(phase)) {
        throw InvalidArgument("phase must be finite");
    }
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    const double centre = s * s * vxx0 + c * c * vpp0;
    const double half = 0.5 * std::abs(std::sin(2.0 * phase)) * root;
    return {phase, centre - half, centre + half};
}

BoundPair rql_osc_dimensional(double vXX0, double vPP0, double m,
                              double omega, double hbar, double t) {
    const double root = correlation_root(vXX0, vPP0, hbar);
    check_positive(m, "m");
    check_positive(omega, "omega");
    if (!std::isfinite(t)) {
        throw InvalidArgument("time must be finite");
    }
    const double ph = omega * t;
    const double mw = m * omega;
    const double c = std::cos(ph);
    const double s = std::sin(ph);
    const double centre = c * c * vXX0 + s * s * vPP0 / (mw * mw);
    const double half = std::abs(std::sin(2.0 * ph)) * root / (2.0 * mw);
    return {t, centre - half, centre + half};
}

double t_contract_osc(double vxx0, double vpp0) {
    const double root = correlation_root(vxx0, vpp0, 1.0);
    if (root == 0.0) {
        return 0.0;
    }
    // root > 0 keeps atan2 in (0, pi).
    return std::atan2(root, vpp0 - vxx0);
}

double sql_reference(double m, double hbar, double t) {
    check_positive(m, "m");
    check_positive(hbar, "hbar");
    check_time(t);
    return hbar * t / m;
}

BoundPair position_envelope(const SystemModel &model, double vxx0,
                            double vpp0, const PhysConfig &c, double t) {
    validate_model(model);
    if (const auto *f = std::get_if<FreeMass>(&model)) {
        return rql_free(vxx0, vpp0, f->m, c.hbar, t);
    }
    if (const auto *o = std::get_if<Oscillator>(&model)) {
        return rql_osc_dimensional(vxx0, vpp0, o->m, o->omega, c.hbar, t);
    }
    const auto &d = std::get<DimensionlessOscillator>(model);
    BoundPair b = rql_osc_x(vxx0, vpp0, d.omega * t);
    b.t = t;
    return b;
}

BoundPair momentum_envelope(const SystemModel &model, double vxx0,
                            double vpp0, const PhysConfig &c, double t) {
    validate_model(model);
    if (const auto *f = std::get_if<FreeMass>(&model)) {
        correlation_root(vxx0, vpp0, c.hbar);
        check_positive(f->m, "m");
        check_time(t);
        return {t, vpp0, vpp0};
    }
    if (const auto *o = std::get_if<Oscillator>(&model)) {
        check_positive(c.hbar, "hbar");
        const double mw = o->m * o->omega;
        const double scale = mw * c.hbar;
        BoundPair b = rql_osc_p(vxx0 * mw / c.hbar, vpp0 / scale, o->omega * t);
        return {t, b.lower * scale, b.upper * scale};
    }
    const auto &d = std::get<DimensionlessOscillator>(model);
    BoundPair b = rql_osc_p(vxx0, vpp0, d.omega * t);
    b.t = t;
    return b;
}

double contraction_horizon(const SystemModel &model, double vxx0, double vpp0,
                           const PhysConfig &c) {
    validate_model(model);
    if (const auto *f = std::get_if<FreeMass>(&model)) {
        return t_contract_free(vxx0, vpp0, f->m, c.hbar);
    }
    if (const auto *o = std::get_if<Oscillator>(&model)) {
        check_positive(c.hbar, "hbar");
        // Quadrature scaling x = sqrt(m w / hbar) X, p = P / sqrt(m hbar w).
        const double mw = o->m * o->omega;
        return t_contract_osc(vxx0 * mw / c.hbar, vpp0 / (mw * c.hbar)) /
               o->omega;
    }
    const auto &d = std::get<DimensionlessOscillator>(model);
    if (d.omega == 0.0) {
        throw InvalidArgument(
            "contraction horizon undefined for a zero-frequency oscillator");
    }
    return t_contract_osc(vxx0, vpp0) / d.omega;
}

} // namespace rql
