#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rql/bounds.hpp"
#include "rql/extremal.hpp"
#include "rql/gaussian.hpp"

namespace rql::oracle {

/// Uniform periodic grid x_j = x_min + j dx, dx = (x_max - x_min) / n,
/// j = 0..n-1. Momentum samples follow p_j = 2 pi hbar j / L for
/// j in [-n/2, n/2), stored in FFT order.
struct Grid {
    double x_min = -1.0;
    double x_max = 1.0;
    std::size_t n = 2;

    static Grid centred(double centre, double half_width, std::size_t n);

    [[nodiscard]] double length() const { return x_max - x_min; }
    [[nodiscard]] double dx() const { return length() / static_cast<double>(n); }
    [[nodiscard]] double x(std::size_t j) const {
        return x_min + static_cast<double>(j) * dx();
    }
    /// Momentum of FFT bin k.
    [[nodiscard]] double p(std::size_t k, double hbar) const;
};

/// Throws InvalidArgument unless x_max > x_min and n is a power of two >= 2.
void validate_grid(const Grid &g);

struct WaveFn {
    Grid grid;
    std::vector<std::complex<double>> amps;
    double hbar = 1.0;
};

struct Moments {
    double norm = 0.0;
    double mean_x = 0.0;
    double mean_p = 0.0;
    double vxx = 0.0;
    double vpp = 0.0;
    double vxp = 0.0;

    [[nodiscard]] GaussianState to_state() const {
        return {mean_x, mean_p, vxx, vxp, vpp};
    }
};

/// Amplitude of the extremal Gaussian at a single point,
/// (Re l / pi hbar)^{1/4} exp(i <P> x / hbar - l (x - <X>)^2 / 2 hbar).
std::complex<double> extremal_amplitude(const ExtremalSpec &spec,
                                        double mean_x, double mean_p,
                                        double hbar, double x);

WaveFn sample(const Grid &g, double hbar,
              const std::function<std::complex<double>(double)> &psi);

/// Samples the extremal state. Throws OracleError when the grid does not
/// cover mean_x +- 8 sigma_X or the quadrature norm misses 1 by more than
/// 1e-8.
WaveFn sample_extremal(const ExtremalSpec &spec, double mean_x, double mean_p,
                       const Grid &g, double hbar);

/// Quadrature norm sum |psi|^2 dx.
double norm(const WaveFn &psi);

/// Position moments by trapezoid quadrature, momentum moments spectrally,
/// vxp = Re <psi| dX dP |psi>. Throws OracleError when the norm is off by
/// more than 1e-6.
Moments moments(const WaveFn &psi);

/// Exact free propagation in the momentum representation. Throws OracleError
/// if the momentum support is not resolved or the spread packet would not
/// fit in the window.
WaveFn propagate_free(const WaveFn &psi, double m, double t);

/// Second-order Strang step, or the fourth-order triple-jump composition of
/// three Strang steps.
enum class Splitting { Strang, Yoshida4 };

/// Split-step (half potential, kinetic, half potential) for
/// H = P^2/2m + m omega^2 X^2 / 2, repeated n_steps times.
WaveFn propagate_osc(const WaveFn &psi, double m, double omega, double t,
                     std::size_t n_steps, Splitting splitting = Splitting::Strang);

struct ConvergedPropagation {
    WaveFn psi;
    std::size_t n_steps = 0;
    /// Normalized moment change between the last two step counts.
    double change = 0.0;
};

/// Doubles n_steps from `start` until the moments move by less than `tol`.
/// Throws OracleError at `cap`, quoting the achieved change.
ConvergedPropagation propagate_osc_converged(const WaveFn &psi, double m,
                                             double omega, double t,
                                             double tol = 1e-8,
                                             std::size_t start = 4096,
                                             std::size_t cap = 65536,
                                             Splitting splitting = Splitting::Strang);

/// Largest normalized discrepancy between two moment sets: means scaled by
/// the reference standard deviations, variances relative to the reference,
/// vxp relative to sqrt(vxx vpp).
double moment_distance(const GaussianState &a, const GaussianState &ref);

/// Grid wide enough for the state over [0, t_max]: centred on the mean
/// trajectory, half-width = excursion + domain_sigmas * largest sigma_X.
/// The dimensionless oscillator is handled as Oscillator(m = 1/omega, omega)
/// in quadrature units.
Grid suggest_grid(const GaussianState &s0, const SystemModel &model,
                  double t_max, std::size_t n, double domain_sigmas);

/// CSV dump with header x,re,im,abs2.
void write_csv(const WaveFn &psi, std::ostream &out);

struct OracleOptions {
    std::size_t n = std::size_t{1} << 14;
    double domain_sigmas = 40.0;
    double tolerance = 1e-8;
    std::size_t osc_steps = 256;
    double osc_tolerance = 1e-10;
    std::size_t osc_step_cap = 65536;
    Splitting splitting = Splitting::Yoshida4;
    unsigned threads = 1;
};

struct OraclePoint {
    double t = 0.0;
    Moments oracle;
    GaussianState expected;
    BoundPair envelope;
    /// moment_distance(oracle, core-gaussian evolution)
    double dev_evolution = 0.0;
    /// |vxx - saturated side| / saturated side
    double dev_saturation = 0.0;
    /// min(vxx - lower, upper - vxx) / vxx; negative means a violation
    double sandwich_slack = 0.0;
};

struct OracleReport {
    std::vector<OraclePoint> points;
    double max_dev_evolution = 0.0;
    double max_dev_saturation = 0.0;
    double min_sandwich_slack = 0.0;
    std::vector<std::string> diagnostics;
    bool passed = false;
};

/// Samples the extremal state, propagates it on the grid to every time in
/// t_grid and compares the quadrature moments with the closed-form Gaussian
/// evolution and with the envelopes. Accepts FreeMass and Oscillator models;
/// a DimensionlessOscillator is treated as Oscillator(m = 1/omega, omega) with
/// hbar = 1. Discretization failures are reported as diagnostics and fail the
/// report instead of throwing.
OracleReport verify_bounds_oracle(const ExtremalSpec &spec, double mean_x,
                                  double mean_p, const SystemModel &model,
                                  const PhysConfig &c,
                                  const std::vector<double> &t_grid,
                                  const OracleOptions &opt = {});

/// Same for a pure Gaussian state given by its moments.
OracleReport verify_bounds_oracle(const GaussianState &s,
                                  const SystemModel &model,
                                  const PhysConfig &c,
                                  const std::vector<double> &t_grid,
                                  const OracleOptions &opt = {});

} // namespace rql::oracle
