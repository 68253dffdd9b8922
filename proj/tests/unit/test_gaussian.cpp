#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rql/error.hpp"
#include "rql/gaussian.hpp"

using namespace rql;
namespace to = testing_oracles;

TEST_CASE("flow maps match the matrix exponential of the generator") {
    const SystemModel models[] = {FreeMass{0.7}, Oscillator{2.0, 1.3},
                                  DimensionlessOscillator{0.9}};
    for (const auto &model : models) {
        for (double t : {-2.0, 0.0, 0.3, 1.0, 5.5}) {
            const SymplecticMap m = flow_map(model, t);
            const Eigen::Matrix2d ref = to::flow_expm(model, t);
            CHECK((m - ref).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(m.determinant() == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("evolution agrees with the reference flow on random states") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ut(0.0, 4.0);
    const PhysConfig c{0.37};
    const SystemModel models[] = {FreeMass{1.9}, Oscillator{0.4, 2.2},
                                  DimensionlessOscillator{1.0}};
    for (int i = 0; i < 300; ++i) {
        const SystemModel &model = models[i % 3];
        const double hbar = effective_hbar(model, c);
        const GaussianState s = to::random_state(rng, hbar);
        const double t = ut(rng);
        const GaussianState e = evolve(s, model, t, c);
        const GaussianState r = to::evolve_expm(s, model, t);
        const double scale = std::sqrt(s.vxx * s.vpp) + s.vxx + s.vpp;
        CHECK(std::abs(e.vxx - r.vxx) < 1e-11 * scale * (1 + t * t));
        CHECK(std::abs(e.vpp - r.vpp) < 1e-11 * scale * (1 + t * t));
        CHECK(std::abs(e.vxp - r.vxp) < 1e-11 * scale * (1 + t * t));
        CHECK(std::abs(e.mean_x - r.mean_x) < 1e-11 * (1 + t) * 4);
        CHECK(e.vxx == doctest::Approx(variance_x_closed_form(s, model, t, c))
                           .epsilon(1e-12));
        // The determinant is a symplectic invariant.
        const double d0 = s.vxx * s.vpp - s.vxp * s.vxp;
        const double d1 = e.vxx * e.vpp - e.vxp * e.vxp;
        CHECK(std::abs(d1 - d0) < 1e-9 * scale * scale * (1 + t * t * t * t));
    }
}

TEST_CASE("backward evolution undoes forward evolution") {
    const GaussianState s{0.5, -1.0, 0.8, -0.3, 0.6};
    const SystemModel model = Oscillator{1.5, 0.8};
    const GaussianState back = evolve(evolve(s, model, 2.0), model, -2.0);
    CHECK(back.vxx == doctest::Approx(s.vxx).epsilon(1e-12));
    CHECK(back.vxp == doctest::Approx(s.vxp).epsilon(1e-12));
    CHECK(back.mean_p == doctest::Approx(s.mean_p).epsilon(1e-12));
}

TEST_CASE("free spreading of a minimal packet") {
    // vxx(t) = vxx0 + t^2 vpp0 / m^2 for an uncorrelated state.
    const GaussianState s{0.0, 0.0, 0.25, 0.0, 1.0};
    for (double t : {0.5, 1.0, 2.0}) {
        CHECK(evolve(s, FreeMass{1.0}, t).vxx ==
              doctest::Approx((1 + 4 * t * t) / 4).epsilon(1e-15));
    }
}

TEST_CASE("validation") {
    const PhysConfig c{1.0};
    CHECK(validate_state({0, 0, 0.5, 0.0, 0.5}, c).ok);
    CHECK(validate_state({0, 0, 1.0, 0.5, 0.5}, c).ok);
    CHECK_FALSE(validate_state({0, 0, 1.0, 0.6, 0.5}, c).ok);
    CHECK(validate_state({0, 0, 0.5, 0.0, 0.5 * (1 - 1e-14)}, c).ok);
    CHECK_FALSE(validate_state({0, 0, -1.0, 0.0, 0.5}, c).ok);
    CHECK_FALSE(validate_state({0, 0, 0.5, 0.0, NAN}, c).ok);
    CHECK_THROWS_AS(require_valid({0, 0, 0.1, 0.0, 0.1}, c), InvalidArgument);
    CHECK_THROWS_AS(validate_model(FreeMass{0.0}), InvalidArgument);
    CHECK_THROWS_AS(validate_model(Oscillator{1.0, -1.0}), InvalidArgument);
    CHECK_THROWS_AS(validate_config(PhysConfig{0.0}), InvalidArgument);
    CHECK_THROWS_AS(evolve({0, 0, 0.1, 0.0, 0.1}, FreeMass{1.0}, 1.0, c),
                    InvalidArgument);
}

TEST_CASE("dimensionless model ignores the configured hbar") {
    const PhysConfig c{1e-3};
    CHECK(effective_hbar(DimensionlessOscillator{1.0}, c) == 1.0);
    CHECK(effective_hbar(FreeMass{1.0}, c) == 1e-3);
    // Valid only with hbar = 1.
    const GaussianState s{0, 0, 0.5, 0.0, 0.5};
    CHECK_NOTHROW(evolve(s, DimensionlessOscillator{2.0}, 1.0, c));
    CHECK_THROWS_AS(evolve({0, 0, 0.01, 0, 0.01}, DimensionlessOscillator{2.0}, 1.0, c),
                    InvalidArgument);
}

TEST_CASE("omega = 0 dimensionless flow is the identity") {
    const SymplecticMap m = flow_map(DimensionlessOscillator{0.0}, 3.0);
    CHECK(m.isIdentity(0.0));
}
