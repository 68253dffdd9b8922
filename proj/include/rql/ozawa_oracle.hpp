#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "rql/extremal.hpp"
#include "rql/grid_oracle.hpp"

namespace rql::ozawa {

/// Post-coupling two-mode wavefunction evaluated pointwise. The coupling is a
/// point transformation q -> L q on (x, y) with L = exp(A k tau) taken from
/// the generator by a numerical matrix exponential, so
///   Psi(x', y') = psi(u) chi(v),  (u, v) = L^{-1} (x', y').
/// At k tau = pi / (3 sqrt3) this is psi(y') chi(y' - x').
class CoupledWavefunction {
  public:
    CoupledWavefunction(const ExtremalSpec &system, double mean_x,
                        double mean_p, const ExtremalSpec &meter,
                        double meter_mean_y, double meter_mean_p, double k,
                        double tau, double hbar);

    std::complex<double> operator()(double x, double y) const;

    [[nodiscard]] const Eigen::Matrix2d &position_map() const { return map_; }
    [[nodiscard]] double hbar() const { return hbar_; }

  private:
    ExtremalSpec system_;
    double mean_x_;
    double mean_p_;
    ExtremalSpec meter_;
    double meter_mean_y_;
    double meter_mean_p_;
    double hbar_;
    Eigen::Matrix2d map_;
    Eigen::Matrix2d inverse_;
};

/// Row-major samples amps[ix * ny + iy] on gx (system) x gy (meter).
struct JointWaveFn {
    oracle::Grid gx;
    oracle::Grid gy;
    std::vector<std::complex<double>> amps;
    double hbar = 1.0;
};

struct JointMoments {
    double norm = 0.0;
    /// (x, p_x, y, p_y)
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();
};

JointWaveFn sample_joint(const CoupledWavefunction &psi, const oracle::Grid &gx,
                         const oracle::Grid &gy);

/// Quadrature moments: positions directly, momenta by 2D FFT, position-
/// momentum cross terms as Re <Psi| dq_a dP_b |Psi>.
JointMoments joint_moments(const JointWaveFn &psi);

/// Normalized system wavefunction x' -> Psi(x', y_reading) on gx.
oracle::WaveFn conditional_slice(const CoupledWavefunction &psi,
                                 const oracle::Grid &gx, double y_reading);

} // namespace rql::ozawa
