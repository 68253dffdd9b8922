#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rql/gaussian.hpp"

namespace rql::ozawa {

/// k tau at which the coupling maps x -> x - y, y -> x.
inline constexpr double kIdealPhase = std::numbers::pi / (3.0 * std::numbers::sqrt3);

/// Joint system (x, p_x) and meter (y, p_y) Gaussian, ordered
/// (x, p_x, y, p_y).
struct TwoModeGaussian {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Matrix4d cov = Eigen::Matrix4d::Identity() * 0.5;

    static TwoModeGaussian product(const GaussianState &system,
                                   const GaussianState &meter);
    [[nodiscard]] GaussianState system() const;
    [[nodiscard]] GaussianState meter() const;
};

/// Linear Heisenberg generator of H = k[2 x p_y - 2 p_x y
/// + (x p_x + p_x x - y p_y - p_y y)/2]: d/dt v = G v.
Eigen::Matrix4d ozawa_generator(double k);

/// exp(G tau) in closed form. Both 2x2 blocks are
/// cos(sqrt3 k tau) I + sin(sqrt3 k tau)/sqrt3 A with A^2 = -3 I.
Eigen::Matrix4d ozawa_map(double k, double tau);

/// Canonical form J for (x, p_x, y, p_y); symplectic maps satisfy
/// M J M^T = J.
Eigen::Matrix4d symplectic_form();

/// Contractive (+ branch) meter state with <y> = <p_y> = 0 and the given
/// variances.
GaussianState prepare_meter(double vyy0, double vpp_y0, double hbar);

/// Joint state after the coupling acts for time tau on the uncorrelated
/// product of system and meter. Free Hamiltonians are neglected.
TwoModeGaussian couple(const GaussianState &system, const GaussianState &meter,
                       double k, double tau, const PhysConfig &c = {});

GaussianState meter_marginal(const TwoModeGaussian &j);

/// Posterior system state after the meter position reads exactly y_reading:
/// Gaussian conditioning on y, covariance by Schur complement. The momentum
/// p_y is left unobserved.
GaussianState read_meter(const TwoModeGaussian &j, double y_reading);

enum class Readout { Mean, Sample };
enum class Schedule { Auto, Manual };

struct OzawaConfig {
    PhysConfig phys;
    SystemModel system = FreeMass{1.0};
    /// Defaults to the meter preparation state.
    std::optional<GaussianState> initial_state;
    double vyy0 = 1.0;
    double vpp_y0 = 1.0;
    double k = 1.0;
    double tau = kIdealPhase;
    Schedule schedule = Schedule::Auto;
    /// Measurement period; used only for Schedule::Manual.
    double T = 0.0;
    int N = 1;
    /// Meter oscillator frequency (0 for a free meter).
    double Omega = 0.0;
    double delta_tau = 0.0;
    Readout readout = Readout::Mean;
    std::uint64_t seed = 0;
    bool strict = false;
};

struct RegimeWarning {
    std::string code;
    std::string message;
};

/// Raised by run_protocol in strict mode when check_regime has findings.
class RegimeViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct MeasurementRecord {
    int index = 0;
    double t = 0.0;
    double y_reading = 0.0;
    GaussianState pre;
    GaussianState post;
    double vyy_meter = 0.0;
};

struct ProtocolTrace {
    std::vector<MeasurementRecord> records;
    std::vector<RegimeWarning> warnings;
    double period = 0.0;
};

void validate(const OzawaConfig &cfg);

/// T for the config: tau plus the contraction horizon of the meter state
/// (t_M or t_M') under Schedule::Auto, cfg.T otherwise.
double measurement_period(const OzawaConfig &cfg);

/// Flags when
///   delta_tau k > 0.1,
///   |k tau / (pi / 3 sqrt3) - 1| > 1e-9,
///   tau max(Omega, omega_eff) > 0.1,
/// where omega_eff is the system frequency, or sigma_P / (m sigma_X) of the
/// meter and initial states for a free mass.
std::vector<RegimeWarning> check_regime(const OzawaConfig &cfg);

/// Repeated measurement: couple a fresh meter, read it, condition the system,
/// let the system evolve freely for T - tau, and repeat N times.
ProtocolTrace run_protocol(const OzawaConfig &cfg);

/// CSV with header
/// i,t,y_reading,vxx_pre,vxp_pre,vpp_pre,vxx_post,vxp_post,vpp_post,vyy_meter
void write_trace_csv(const ProtocolTrace &trace, std::ostream &out);

} // namespace rql::ozawa
