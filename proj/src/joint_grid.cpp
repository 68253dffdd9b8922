#include "rql/ozawa_oracle.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "rql/error.hpp"
#include "rql/fft.hpp"
#include "rql/ozawa.hpp"

namespace rql::ozawa {

using cd = std::complex<double>;

CoupledWavefunction::CoupledWavefunction(const ExtremalSpec &system,
                                         double mean_x, double mean_p,
                                         const ExtremalSpec &meter,
                                         double meter_mean_y,
                                         double meter_mean_p, double k,
                                         double tau, double hbar)
    : system_(system), mean_x_(mean_x), mean_p_(mean_p), meter_(meter),
      meter_mean_y_(meter_mean_y), meter_mean_p_(meter_mean_p), hbar_(hbar) {
    validate_spec(system_);
    validate_spec(meter_);
    if (!(hbar > 0.0)) {
        throw InvalidArgument("hbar must be positive");
    }
    const Eigen::Matrix4d g = ozawa_generator(k) * tau;
    Eigen::Matrix2d pos;
    pos << g(0, 0), g(0, 2), g(2, 0), g(2, 2);
    map_ = pos.exp();
    inverse_ = map_.inverse();
}

cd CoupledWavefunction::operator()(double x, double y) const {
    const Eigen::Vector2d uv = inverse_ * Eigen::Vector2d{x, y};
    return oracle::extremal_amplitude(system_, mean_x_, mean_p_, hbar_, uv(0)) *
           oracle::extremal_amplitude(meter_, meter_mean_y_, meter_mean_p_,
                                      hbar_, uv(1));
}

JointWaveFn sample_joint(const CoupledWavefunction &psi, const oracle::Grid &gx,
                         const oracle::Grid &gy) {
    oracle::validate_grid(gx);
    oracle::validate_grid(gy);
    JointWaveFn out{gx, gy, std::vector<cd>(gx.n * gy.n), psi.hbar()};
    for (std::size_t i = 0; i < gx.n; ++i) {
        const double x = gx.x(i);
        for (std::size_t j = 0; j < gy.n; ++j) {
            out.amps[i * gy.n + j] = psi(x, gy.x(j));
        }
    }
    return out;
}

JointMoments joint_moments(const JointWaveFn &psi) {
    const std::size_t nx = psi.gx.n;
    const std::size_t ny = psi.gy.n;
    if (psi.amps.size() != nx * ny) {
        throw InvalidArgument("joint wavefunction size does not match its grid");
    }
    const double cell = psi.gx.dx() * psi.gy.dx();

    JointMoments mo;
    double w = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double a = std::norm(psi.amps[i * ny + j]);
            w += a;
            sx += psi.gx.x(i) * a;
            sy += psi.gy.x(j) * a;
        }
    }
    mo.norm = w * cell;
    if (std::abs(mo.norm - 1.0) > 1e-6) {
        throw OracleError("joint wavefunction norm deviates from 1 by more than 1e-6");
    }
    mo.mean(0) = sx / w;
    mo.mean(2) = sy / w;

    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        const double dx = psi.gx.x(i) - mo.mean(0);
        for (std::size_t j = 0; j < ny; ++j) {
            const double dy = psi.gy.x(j) - mo.mean(2);
            const double a = std::norm(psi.amps[i * ny + j]);
            sxx += dx * dx * a;
            syy += dy * dy * a;
            sxy += dx * dy * a;
        }
    }
    mo.cov(0, 0) = sxx / w;
    mo.cov(2, 2) = syy / w;
    mo.cov(0, 2) = mo.cov(2, 0) = sxy / w;

    const Fft fft(nx, ny);
    std::vector<cd> phi = psi.amps;
    fft.forward(phi);
    double pw = 0.0;
    double spx = 0.0;
    double spy = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        const double px = psi.gx.p(i, psi.hbar);
        for (std::size_t j = 0; j < ny; ++j) {
            const double a = std::norm(phi[i * ny + j]);
            pw += a;
            spx += px * a;
            spy += psi.gy.p(j, psi.hbar) * a;
        }
    }
    mo.mean(1) = spx / pw;
    mo.mean(3) = spy / pw;

    double spxpx = 0.0;
    double spypy = 0.0;
    double spxpy = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        const double dpx = psi.gx.p(i, psi.hbar) - mo.mean(1);
        for (std::size_t j = 0; j < ny; ++j) {
            const double dpy = psi.gy.p(j, psi.hbar) - mo.mean(3);
            const double a = std::norm(phi[i * ny + j]);
            spxpx += dpx * dpx * a;
            spypy += dpy * dpy * a;
            spxpy += dpx * dpy * a;
        }
    }
    mo.cov(1, 1) = spxpx / pw;
    mo.cov(3, 3) = spypy / pw;
    mo.cov(1, 3) = mo.cov(3, 1) = spxpy / pw;

    // dP_x Psi and dP_y Psi back in position space.
    std::vector<cd> dpx_psi(phi.size());
    std::vector<cd> dpy_psi(phi.size());
    const double inv = 1.0 / static_cast<double>(nx * ny);
    for (std::size_t i = 0; i < nx; ++i) {
        const double dpx = psi.gx.p(i, psi.hbar) - mo.mean(1);
        for (std::size_t j = 0; j < ny; ++j) {
            const double dpy = psi.gy.p(j, psi.hbar) - mo.mean(3);
            dpx_psi[i * ny + j] = phi[i * ny + j] * (dpx * inv);
            dpy_psi[i * ny + j] = phi[i * ny + j] * (dpy * inv);
        }
    }
    fft.backward(dpx_psi);
    fft.backward(dpy_psi);

    // Entries (q_a, P_b) for q in {x, y}, P in {p_x, p_y}.
    double c_x_px = 0.0;
    double c_x_py = 0.0;
    double c_y_px = 0.0;
    double c_y_py = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        const double dx = psi.gx.x(i) - mo.mean(0);
        for (std::size_t j = 0; j < ny; ++j) {
            const double dy = psi.gy.x(j) - mo.mean(2);
            const std::size_t at = i * ny + j;
            const cd a = std::conj(psi.amps[at]);
            c_x_px += (a * dx * dpx_psi[at]).real();
            c_x_py += (a * dx * dpy_psi[at]).real();
            c_y_px += (a * dy * dpx_psi[at]).real();
            c_y_py += (a * dy * dpy_psi[at]).real();
        }
    }
    mo.cov(0, 1) = mo.cov(1, 0) = c_x_px * cell / mo.norm;
    mo.cov(0, 3) = mo.cov(3, 0) = c_x_py * cell / mo.norm;
    mo.cov(2, 1) = mo.cov(1, 2) = c_y_px * cell / mo.norm;
    mo.cov(2, 3) = mo.cov(3, 2) = c_y_py * cell / mo.norm;
    return mo;
}

oracle::WaveFn conditional_slice(const CoupledWavefunction &psi,
                                 const oracle::Grid &gx, double y_reading) {
    oracle::WaveFn out = oracle::sample(
        gx, psi.hbar(), [&](double x) { return psi(x, y_reading); });
    const double n = oracle::norm(out);
    if (!(n > 0.0)) {
        throw OracleError("conditional slice has zero norm");
    }
    const double scale = 1.0 / std::sqrt(n);
    for (auto &a : out.amps) {
        a *= scale;
    }
    return out;
}

} // namespace rql::ozawa
