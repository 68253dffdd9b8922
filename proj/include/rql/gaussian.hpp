#pragma once

#include <string>
#include <variant>

#include <Eigen/Dense>

namespace rql {

struct PhysConfig {
    double hbar = 1.0;
};

/// H = P^2 / 2m.
struct FreeMass {
    double m = 1.0;
};

/// H = P^2 / 2m + m omega^2 X^2 / 2 in dimensional units.
struct Oscillator {
    double m = 1.0;
    double omega = 1.0;
};

/// H = hbar omega (p^2 + x^2) / 2 in the quadratures
/// x = sqrt(m omega / hbar) X, p = P / sqrt(m hbar omega).
/// States evolved under this model are always dimensionless (hbar = 1),
/// whatever PhysConfig says. omega = 0 gives the trivial flow.
struct DimensionlessOscillator {
    double omega = 1.0;
};

using SystemModel = std::variant<FreeMass, Oscillator, DimensionlessOscillator>;

/// Single-mode Gaussian moments. vxp is the symmetrized covariance
/// (1/2)<dX dP + dP dX>, i.e. half the anticommutator expectation.
struct GaussianState {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double vxx = 0.5;
    double vxp = 0.0;
    double vpp = 0.5;

    [[nodiscard]] Eigen::Vector2d mean() const { return {mean_x, mean_p}; }
    [[nodiscard]] Eigen::Matrix2d covariance() const {
        Eigen::Matrix2d v;
        v << vxx, vxp, vxp, vpp;
        return v;
    }
    static GaussianState from_moments(const Eigen::Vector2d &mean,
                                      const Eigen::Matrix2d &cov);
};

/// Linear phase-space flow acting on (x, p) deviations.
using SymplecticMap = Eigen::Matrix2d;

struct ValidationReport {
    bool ok = true;
    /// vxx vpp - vxp^2 - hbar^2/4; negative means the Schrodinger-Robertson
    /// relation fails.
    double margin = 0.0;
    std::string message;
};

/// Absolute slack on the uncertainty-product margin, in units of hbar^2.
inline constexpr double kUncertaintyTolerance = 1e-12;

/// hbar actually used for a model: 1 for the dimensionless oscillator.
double effective_hbar(const SystemModel &model, const PhysConfig &c);

/// Throws InvalidArgument on non-positive mass or frequency.
void validate_model(const SystemModel &model);
void validate_config(const PhysConfig &c);

ValidationReport validate_state(const GaussianState &s, const PhysConfig &c);

/// Throws InvalidArgument carrying the validation message.
void require_valid(const GaussianState &s, const PhysConfig &c);

SymplecticMap flow_map(const SystemModel &model, double t);

/// Exact Heisenberg evolution of the moments: mean <- M mean, V <- M V M^T.
/// Negative t runs the flow backwards.
GaussianState evolve(const GaussianState &s, const SystemModel &model,
                     double t, const PhysConfig &c = {});

/// Direct evaluation of the position variance formula, without building the
/// flow matrix. Agrees with evolve(...).vxx.
double variance_x_closed_form(const GaussianState &s, const SystemModel &model,
                              double t, const PhysConfig &c = {});

std::string to_string(const SystemModel &model);

} // namespace rql
