#include "rql/extremal.hpp"

#include <cmath>
#include <numbers>

#include "rql/bounds.hpp"
#include "rql/error.hpp"

namespace rql {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) {
        w += kTwoPi;
    }
    // fmod of a value just below zero can round up to exactly 2 pi.
    return w >= kTwoPi ? 0.0 : w;
}

} // namespace

cplx SqueezeParams::beta() const { return beta_from_alpha(alpha, r, theta); }

void validate_spec(const ExtremalSpec &spec) {
    if (!std::isfinite(spec.param.real()) || !std::isfinite(spec.param.imag())) {
        throw InvalidArgument("extremal parameter must be finite");
    }
    if (!(spec.param.real() > 0.0)) {
        throw InvalidArgument("extremal parameter needs Re > 0");
    }
    const double im = spec.param.imag();
    if (im != 0.0 && (im > 0.0) != (spec.sign == Sign::Plus)) {
        throw InvalidArgument(
            "sign of Im(param) disagrees with the saturation sign");
    }
}

cplx lambda_from_variances(double vxx0, double vpp0, double hbar, Sign sign) {
    const double root = correlation_root(vxx0, vpp0, hbar);
    return {hbar / (2.0 * vxx0), sign_value(sign) * root / (2.0 * vxx0)};
}

VariancePair variances_from_lambda(cplx lambda, double hbar) {
    if (!(lambda.real() > 0.0)) {
        throw InvalidArgument("lambda needs Re > 0");
    }
    if (!(hbar > 0.0)) {
        throw InvalidArgument("hbar must be positive");
    }
    const double re = lambda.real();
    return {hbar / (2.0 * re), hbar * std::norm(lambda) / (2.0 * re)};
}

ExtremalSpec extremal_spec(double vxx0, double vpp0, double hbar, Sign sign) {
    return {sign, lambda_from_variances(vxx0, vpp0, hbar, sign)};
}

GaussianState gaussian_from_extremal(const ExtremalSpec &spec, double mean_x,
                                     double mean_p, double hbar) {
    validate_spec(spec);
    const auto v = variances_from_lambda(spec.param, hbar);
    GaussianState s;
    s.mean_x = mean_x;
    s.mean_p = mean_p;
    s.vxx = v.vxx;
    s.vpp = v.vpp;
    s.vxp = -spec.param.imag() * v.vxx;
    return s;
}

ExtremalSpec extremal_spec_from_state(const GaussianState &s, double hbar) {
    require_valid(s, PhysConfig{hbar});
    const double margin = s.vxx * s.vpp - s.vxp * s.vxp - 0.25 * hbar * hbar;
    if (margin > 1e-9 * s.vxx * s.vpp) {
        throw InvalidArgument(
            "state is not minimum-uncertainty; it has no wavefunction label");
    }
    const cplx lambda{hbar / (2.0 * s.vxx), -s.vxp / s.vxx};
    return {lambda.imag() >= 0.0 ? Sign::Plus : Sign::Minus, lambda};
}

cplx eta_from_squeeze(double r, double theta) {
    if (!std::isfinite(r) || r < 0.0) {
        throw InvalidArgument("squeeze magnitude r must be non-negative");
    }
    const double s2 = std::sinh(2.0 * r);
    const double den = std::cosh(2.0 * r) - std::cos(theta) * s2;
    return cplx{1.0, std::sin(theta) * s2} / den;
}

SqueezeLabel squeeze_from_eta(cplx eta) {
    if (!(eta.real() > 0.0)) {
        throw InvalidArgument("eta needs Re > 0");
    }
    // nu/mu = e^{i theta} tanh r
    const cplx ratio = (eta - 1.0) / (eta + 1.0);
    const double mod = std::abs(ratio);
    if (mod == 0.0) {
        return {0.0, 0.0};
    }
    return {std::atanh(mod), wrap_angle(std::arg(ratio))};
}

cplx beta_from_alpha(cplx alpha, double r, double theta) {
    return std::cosh(r) * alpha + std::polar(std::sinh(r), theta) * std::conj(alpha);
}

SqueezeParams squeeze_evolve(const SqueezeParams &sp, double phase) {
    SqueezeParams out = sp;
    out.alpha = sp.alpha * std::polar(1.0, -phase);
    out.theta = wrap_angle(sp.theta - 2.0 * phase);
    return out;
}

GaussianState gaussian_from_squeeze(const SqueezeParams &sp) {
    const cplx eta = eta_from_squeeze(sp.r, sp.theta);
    const ExtremalSpec spec{eta.imag() >= 0.0 ? Sign::Plus : Sign::Minus, eta};
    return gaussian_from_extremal(spec, std::numbers::sqrt2 * sp.alpha.real(),
                                  std::numbers::sqrt2 * sp.alpha.imag(), 1.0);
}

SqueezeParams squeeze_from_gaussian(const GaussianState &s) {
    const auto label = squeeze_from_eta(extremal_spec_from_state(s, 1.0).param);
    SqueezeParams sp;
    sp.alpha = cplx{s.mean_x, s.mean_p} / std::numbers::sqrt2;
    sp.r = label.r;
    sp.theta = label.theta;
    return sp;
}

cplx eta_from_lambda(cplx lambda, double m_omega) {
    if (!(m_omega > 0.0)) {
        throw InvalidArgument("m*omega must be positive");
    }
    return lambda / m_omega;
}

} // namespace rql
