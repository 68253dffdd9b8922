#pragma once

#include <complex>

#include "rql/gaussian.hpp"

namespace rql {

using cplx = std::complex<double>;

/// Which side of the position envelope a state saturates. Plus is the
/// maximally contractive branch (positive imaginary part, negative vxp, lower
/// envelope); Minus is maximally expanding.
enum class Sign : int { Plus = 1, Minus = -1 };

inline double sign_value(Sign s) { return static_cast<double>(s); }

/// Saturating state label. For the free mass `param` is lambda with
/// dP|psi> = i lambda dX|psi>; for the dimensionless oscillator it is eta with
/// (dp - i eta dx)|psi> = 0. Both require Re(param) > 0, and a nonzero
/// imaginary part must carry the sign of `sign`.
struct ExtremalSpec {
    Sign sign = Sign::Plus;
    cplx param{1.0, 0.0};
};

struct VariancePair {
    double vxx = 0.0;
    double vpp = 0.0;
};

/// Displaced squeezed vacuum |alpha, r e^{i theta}> in dimensionless
/// quadratures, a = (x + i p)/sqrt(2).
struct SqueezeParams {
    cplx alpha{0.0, 0.0};
    double r = 0.0;
    double theta = 0.0;

    [[nodiscard]] cplx mu() const { return {std::cosh(r), 0.0}; }
    [[nodiscard]] cplx nu() const { return std::polar(std::sinh(r), theta); }
    /// Eigenvalue of b = mu a + nu a^dagger.
    [[nodiscard]] cplx beta() const;
};

struct SqueezeLabel {
    double r = 0.0;
    double theta = 0.0;
};

void validate_spec(const ExtremalSpec &spec);

cplx lambda_from_variances(double vxx0, double vpp0, double hbar, Sign sign);
VariancePair variances_from_lambda(cplx lambda, double hbar);

inline cplx eta_from_variances(double vxx0, double vpp0, Sign sign) {
    return lambda_from_variances(vxx0, vpp0, 1.0, sign);
}

/// Label for the extremal state with the given initial variances.
ExtremalSpec extremal_spec(double vxx0, double vpp0, double hbar, Sign sign);

/// Inverse of gaussian_from_extremal for a pure (minimum-uncertainty)
/// Gaussian state. Throws InvalidArgument for mixed states.
ExtremalSpec extremal_spec_from_state(const GaussianState &s, double hbar);

/// Moments of the extremal state. vxp = -Im(param) vxx, so the state sits
/// exactly on the uncertainty boundary.
GaussianState gaussian_from_extremal(const ExtremalSpec &spec, double mean_x,
                                     double mean_p, double hbar);

cplx eta_from_squeeze(double r, double theta);

/// Inverse of eta_from_squeeze; theta in [0, 2 pi), theta = 0 when r = 0.
SqueezeLabel squeeze_from_eta(cplx eta);

cplx beta_from_alpha(cplx alpha, double r, double theta);

/// Free oscillator evolution of the labels over phase omega*t. The global
/// phase e^{-i omega t / 2} is dropped.
SqueezeParams squeeze_evolve(const SqueezeParams &sp, double phase);

/// Dimensionless moments (hbar = 1) of |alpha, r e^{i theta}>.
GaussianState gaussian_from_squeeze(const SqueezeParams &sp);

/// Labels of a minimum-uncertainty dimensionless Gaussian state.
SqueezeParams squeeze_from_gaussian(const GaussianState &s);

/// Dimensionless eta of a free-mass lambda for an oscillator with the given
/// m*omega: eta = lambda / (m omega).
cplx eta_from_lambda(cplx lambda, double m_omega);

} // namespace rql
