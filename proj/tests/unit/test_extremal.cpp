#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rql/bounds.hpp"
#include "rql/error.hpp"
#include "rql/extremal.hpp"

using namespace rql;
namespace to = testing_oracles;

TEST_CASE("labels for unit variances") {
    const cplx eta = eta_from_variances(1.0, 1.0, Sign::Plus);
    CHECK(eta.real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(eta.imag() == doctest::Approx(0.8660254037844386).epsilon(1e-15));
    CHECK(eta_from_variances(1.0, 1.0, Sign::Minus) == std::conj(eta));

    const GaussianState s = gaussian_from_extremal({Sign::Plus, eta}, 0, 0, 1.0);
    CHECK(s.vxx == doctest::Approx(1.0));
    CHECK(s.vpp == doctest::Approx(1.0));
    CHECK(s.vxp < 0.0);
}

TEST_CASE("extremal states sit on the uncertainty boundary") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        const double hbar = 0.3 + 0.1 * (i % 7);
        GaussianState r = to::random_state(rng, hbar);
        if (r.vxx * r.vpp < hbar * hbar / 4 * (1 + 1e-9)) {
            r.vpp *= 1.5;
        }
        const Sign sg = i % 2 == 0 ? Sign::Plus : Sign::Minus;
        const ExtremalSpec spec = extremal_spec(r.vxx, r.vpp, hbar, sg);
        const GaussianState s = gaussian_from_extremal(spec, 0.1, -0.2, hbar);
        CHECK(s.vxx == doctest::Approx(r.vxx).epsilon(1e-13));
        CHECK(s.vpp == doctest::Approx(r.vpp).epsilon(1e-12));
        CHECK(std::abs(s.vxx * s.vpp - s.vxp * s.vxp - hbar * hbar / 4) <
              1e-12 * s.vxx * s.vpp);
        CHECK((s.vxp < 0) == (sg == Sign::Plus));
        const ExtremalSpec back = extremal_spec_from_state(s, hbar);
        CHECK(std::abs(back.param - spec.param) < 1e-12 * std::abs(spec.param));
        CHECK(back.sign == sg);
        // The contractive state saturates the lower envelope, the expanding
        // one the upper.
        for (double t : {0.3, 1.1, 2.7}) {
            const BoundPair b = rql_free(r.vxx, r.vpp, 1.0, hbar, t);
            const double v = evolve(s, FreeMass{1.0}, t, {hbar}).vxx;
            CHECK(v == doctest::Approx(sg == Sign::Plus ? b.lower : b.upper).epsilon(1e-9));
        }
    }
}

TEST_CASE("mixed states have no extremal label") {
    CHECK_THROWS_AS(extremal_spec_from_state({0, 0, 1.0, 0.0, 1.0}, 1.0), InvalidArgument);
    CHECK_THROWS_AS(validate_spec({Sign::Plus, {-1.0, 0.0}}), InvalidArgument);
    CHECK_THROWS_AS(validate_spec({Sign::Plus, {1.0, -0.5}}), InvalidArgument);
    CHECK_NOTHROW(validate_spec({Sign::Minus, {1.0, 0.0}}));
}

TEST_CASE("eta formula in terms of r and theta") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> ur(0.0, 2.0);
    std::uniform_real_distribution<double> uth(0.0, 2 * std::numbers::pi);
    for (int i = 0; i < 200; ++i) {
        const double r = ur(rng);
        const double th = uth(rng);
        const cplx direct = cplx{1.0, std::sin(th) * std::sinh(2 * r)} /
                            (std::cosh(2 * r) - std::cos(th) * std::sinh(2 * r));
        const cplx got = eta_from_squeeze(r, th);
        CHECK(std::abs(got - direct) < 1e-12 * std::abs(direct));
        // nu / mu = (eta - 1)/(eta + 1)
        const cplx ratio = std::polar(std::tanh(r), th);
        CHECK(std::abs((got - 1.0) / (got + 1.0) - ratio) < 1e-12);
        CHECK((got.imag() > 0) == (std::sin(th) > 0));
    }
}

TEST_CASE("squeezed-state moments against a Fock-basis construction") {
    const struct {
        cplx alpha;
        double r;
        double theta;
    } cases[] = {
        {{0.0, 0.0}, 0.0, 0.0},  {{0.7, -0.4}, 0.3, 1.0}, {{-1.1, 0.5}, 0.6, 2.5},
        {{0.2, 1.2}, 0.8, 4.0},  {{1.0, 0.0}, 0.5, 5.9},
    };
    for (const auto &c : cases) {
        const auto f = to::fock_squeezed(c.alpha, c.r, c.theta);
        CHECK(f.eigen_residual < 1e-9);
        const GaussianState g = gaussian_from_squeeze({c.alpha, c.r, c.theta});
        CHECK(g.mean_x == doctest::Approx(f.mean_x).epsilon(1e-9));
        CHECK(g.mean_p == doctest::Approx(f.mean_p).epsilon(1e-9));
        CHECK(g.vxx == doctest::Approx(f.vxx).epsilon(1e-9));
        CHECK(g.vpp == doctest::Approx(f.vpp).epsilon(1e-9));
        CHECK(std::abs(g.vxp - f.vxp) < 1e-9);
        // The state built this way carries the eta of its labels.
        const GaussianState fs{f.mean_x, f.mean_p, f.vxx, f.vxp, f.vpp};
        if (c.r > 0) {
            const ExtremalSpec spec = extremal_spec_from_state(fs, 1.0);
            CHECK(std::abs(spec.param - eta_from_squeeze(c.r, c.theta)) < 1e-8);
        }
        const cplx beta = SqueezeParams{c.alpha, c.r, c.theta}.beta();
        CHECK(std::abs(beta - beta_from_alpha(c.alpha, c.r, c.theta)) < 1e-15);
    }
}

TEST_CASE("eta <-> (r, theta) roundtrip") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ure(1e-3, 10.0);
    std::uniform_real_distribution<double> uim(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const cplx eta{ure(rng), uim(rng)};
        const SqueezeLabel l = squeeze_from_eta(eta);
        CHECK(l.r >= 0.0);
        CHECK(l.theta >= 0.0);
        CHECK(l.theta < 2 * std::numbers::pi);
        CHECK(std::abs(eta_from_squeeze(l.r, l.theta) - eta) < 1e-12 * std::abs(eta));
    }
    const SqueezeLabel vac = squeeze_from_eta({1.0, 0.0});
    CHECK(vac.r == 0.0);
    CHECK(vac.theta == 0.0);
}

TEST_CASE("label evolution follows the oscillator flow") {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const SqueezeParams sp{{u(rng), u(rng)}, 0.6 * (u(rng) + 1), 3.0 * (u(rng) + 1)};
        const double ph = 4.0 * u(rng);
        const GaussianState a = gaussian_from_squeeze(squeeze_evolve(sp, ph));
        const GaussianState b =
            evolve(gaussian_from_squeeze(sp), DimensionlessOscillator{1.0}, ph);
        CHECK(std::abs(a.vxx - b.vxx) < 1e-10);
        CHECK(std::abs(a.vxp - b.vxp) < 1e-10);
        CHECK(std::abs(a.vpp - b.vpp) < 1e-10);
        CHECK(std::abs(a.mean_x - b.mean_x) < 1e-10);
        CHECK(std::abs(a.mean_p - b.mean_p) < 1e-10);
    }
}

TEST_CASE("squeeze labels recovered from moments") {
    const SqueezeParams sp{{0.3, -0.8}, 0.45, 2.2};
    const SqueezeParams back = squeeze_from_gaussian(gaussian_from_squeeze(sp));
    CHECK(std::abs(back.alpha - sp.alpha) < 1e-12);
    CHECK(back.r == doctest::Approx(sp.r).epsilon(1e-12));
    CHECK(back.theta == doctest::Approx(sp.theta).epsilon(1e-12));
}

TEST_CASE("free-mass lambda maps to oscillator eta") {
    const cplx l{0.8, 0.3};
    CHECK(eta_from_lambda(l, 2.0) == cplx{0.4, 0.15});
}
