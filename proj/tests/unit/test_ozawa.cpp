#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "rql/bounds.hpp"
#include "rql/error.hpp"
#include "rql/ozawa.hpp"
#include "rql/ozawa_oracle.hpp"

using namespace rql;
using namespace rql::ozawa;

TEST_CASE("coupling map against the matrix exponential") {
    for (double k : {0.5, 1.0, 3.0}) {
        for (double tau : {0.0, 0.1, kIdealPhase / k, 0.9}) {
            const Eigen::Matrix4d m = ozawa_map(k, tau);
            const Eigen::Matrix4d ref = (ozawa_generator(k) * tau).exp();
            CHECK((m - ref).cwiseAbs().maxCoeff() < 1e-12);
            const Eigen::Matrix4d j = symplectic_form();
            CHECK((m * j * m.transpose() - j).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("ideal coupling swaps the meter onto the system position") {
    const Eigen::Matrix4d m = ozawa_map(2.0, kIdealPhase / 2.0);
    // x -> x - y, y -> x
    CHECK(std::abs(m(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(m(0, 2) + 1.0) < 1e-12);
    CHECK(std::abs(m(2, 0) - 1.0) < 1e-12);
    CHECK(std::abs(m(2, 2)) < 1e-12);
    CHECK(std::abs(m(0, 1)) < 1e-15);
    CHECK(std::abs(m(1, 0)) < 1e-15);
}

TEST_CASE("variance transfer and posterior") {
    const GaussianState sys{0.3, -0.5, 2.0, -0.4, 0.7};
    const GaussianState meter = prepare_meter(1.5, 0.9, 1.0);
    const TwoModeGaussian j = couple(sys, meter, 1.0, kIdealPhase);
    CHECK(meter_marginal(j).vxx == doctest::Approx(sys.vxx).epsilon(1e-12));
    CHECK(meter_marginal(j).mean_x == doctest::Approx(sys.mean_x).epsilon(1e-12));
    for (double y : {-1.0, 0.3, 2.5}) {
        const GaussianState post = read_meter(j, y);
        CHECK(post.vxx == doctest::Approx(meter.vxx).epsilon(1e-10));
        CHECK(post.vxp == doctest::Approx(meter.vxp).epsilon(1e-10));
        CHECK(post.vpp == doctest::Approx(meter.vpp).epsilon(1e-10));
        // x' = x - y with x pinned to the reading.
        CHECK(post.mean_x == doctest::Approx(y - meter.mean_x).epsilon(1e-12));
    }
}

TEST_CASE("joint grid oracle reproduces the coupled covariance") {
    const double hbar = 1.0;
    const ExtremalSpec s_spec = extremal_spec(0.8, 1.2, hbar, Sign::Minus);
    const ExtremalSpec m_spec = extremal_spec(1.0, 1.0, hbar, Sign::Plus);
    const GaussianState sys = gaussian_from_extremal(s_spec, 0.4, 0.2, hbar);
    const GaussianState met = gaussian_from_extremal(m_spec, 0.0, 0.0, hbar);
    for (double ktau : {kIdealPhase, 0.35}) {
        const TwoModeGaussian j = couple(sys, met, 1.0, ktau);
        const CoupledWavefunction psi(s_spec, 0.4, 0.2, m_spec, 0.0, 0.0, 1.0, ktau, hbar);
        const oracle::Grid g{-14.0, 14.0, 256};
        const JointMoments mo = joint_moments(sample_joint(psi, g, g));
        CHECK(mo.norm == doctest::Approx(1.0).epsilon(1e-9));
        CHECK((mo.mean - j.mean).cwiseAbs().maxCoeff() < 1e-7);
        CHECK((mo.cov - j.cov).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("conditional slice matches Gaussian conditioning") {
    const double hbar = 1.0;
    const ExtremalSpec s_spec = extremal_spec(1.3, 0.6, hbar, Sign::Plus);
    const ExtremalSpec m_spec = extremal_spec(0.9, 1.1, hbar, Sign::Plus);
    const GaussianState sys = gaussian_from_extremal(s_spec, -0.3, 0.5, hbar);
    const GaussianState met = gaussian_from_extremal(m_spec, 0.0, 0.0, hbar);
    const oracle::Grid g{-20.0, 20.0, 2048};
    for (double ktau : {kIdealPhase, 0.2, 0.5}) {
        const TwoModeGaussian j = couple(sys, met, 1.0, ktau);
        const CoupledWavefunction psi(s_spec, -0.3, 0.5, m_spec, 0.0, 0.0, 1.0, ktau, hbar);
        for (double y : {-0.8, 0.0, 1.7}) {
            const GaussianState post = read_meter(j, y);
            const oracle::Moments m = oracle::moments(conditional_slice(psi, g, y));
            CHECK(oracle::moment_distance(m.to_state(), post) < 1e-9);
        }
    }
}

TEST_CASE("protocol with the automatic schedule") {
    OzawaConfig cfg;
    cfg.system = FreeMass{1.0};
    cfg.vyy0 = 1.0;
    cfg.vpp_y0 = 1.0;
    cfg.tau = 0.01;
    cfg.k = kIdealPhase / cfg.tau;
    cfg.N = 5;
    const ProtocolTrace tr = run_protocol(cfg);
    REQUIRE(tr.records.size() == 5);
    CHECK(tr.warnings.empty());
    CHECK(tr.period == doctest::Approx(0.01 + t_contract_free(1.0, 1.0, 1.0, 1.0)));
    for (const auto &r : tr.records) {
        CHECK(r.pre.vxx <= cfg.vyy0 + 1e-9);
        CHECK(r.vyy_meter == doctest::Approx(r.pre.vxx).epsilon(1e-10));
    }
}

TEST_CASE("sampled readout is seeded") {
    OzawaConfig cfg;
    cfg.tau = 0.01;
    cfg.k = kIdealPhase / cfg.tau;
    cfg.N = 4;
    cfg.readout = Readout::Sample;
    cfg.seed = 99;
    std::ostringstream a;
    std::ostringstream b;
    write_trace_csv(run_protocol(cfg), a);
    write_trace_csv(run_protocol(cfg), b);
    CHECK(a.str() == b.str());
    cfg.seed = 100;
    std::ostringstream c;
    write_trace_csv(run_protocol(cfg), c);
    CHECK(a.str() != c.str());
}

TEST_CASE("regime checks") {
    OzawaConfig cfg;
    cfg.tau = 0.5;
    cfg.k = 1.0;
    cfg.delta_tau = 0.2;
    const auto w = check_regime(cfg);
    auto has = [&](const std::string &code) {
        return std::any_of(w.begin(), w.end(), [&](const auto &x) { return x.code == code; });
    };
    CHECK(has("timing-jitter"));
    CHECK(has("coupling-phase"));
    CHECK(has("free-hamiltonian"));
    cfg.strict = true;
    CHECK_THROWS_AS(run_protocol(cfg), RegimeViolation);
}

TEST_CASE("invalid protocol configs") {
    OzawaConfig cfg;
    cfg.N = 0;
    CHECK_THROWS_AS(validate(cfg), InvalidArgument);
    cfg.N = 1;
    cfg.vyy0 = 0.1;
    cfg.vpp_y0 = 0.1;
    CHECK_THROWS_AS(validate(cfg), InvalidArgument);
    cfg.vyy0 = 1.0;
    cfg.vpp_y0 = 1.0;
    cfg.schedule = Schedule::Manual;
    cfg.T = cfg.tau / 2;
    CHECK_THROWS_AS(validate(cfg), InvalidArgument);
}
