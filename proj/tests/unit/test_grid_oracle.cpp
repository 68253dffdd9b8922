#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "rql/bounds.hpp"
#include "rql/error.hpp"
#include "rql/grid_oracle.hpp"

using namespace rql;
using namespace rql::oracle;

namespace {

GaussianState plus_state(double vxx, double vpp, double mx, double mp, double hbar) {
    return gaussian_from_extremal(extremal_spec(vxx, vpp, hbar, Sign::Plus), mx, mp, hbar);
}

} // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(validate_grid({-1, 1, 1000}), InvalidArgument);
    CHECK_THROWS_AS(validate_grid({1, -1, 1024}), InvalidArgument);
    CHECK_NOTHROW(validate_grid({-1, 1, 1024}));
    const Grid g{-2.0, 2.0, 8};
    CHECK(g.p(0, 1.0) == 0.0);
    CHECK(g.p(1, 1.0) == doctest::Approx(2 * std::numbers::pi / 4.0));
    CHECK(g.p(4, 1.0) == doctest::Approx(-4 * 2 * std::numbers::pi / 4.0));
    CHECK(g.p(7, 1.0) == doctest::Approx(-2 * std::numbers::pi / 4.0));
}

TEST_CASE("sampled extremal state reproduces its moments") {
    for (double hbar : {1.0, 0.3}) {
        const ExtremalSpec spec = extremal_spec(0.7 * hbar, 1.9 * hbar, hbar, Sign::Plus);
        const GaussianState s = gaussian_from_extremal(spec, 0.4, -1.2, hbar);
        const Grid g = suggest_grid(s, FreeMass{1.0}, 0.0, 4096, 40);
        const Moments m = moments(sample_extremal(spec, 0.4, -1.2, g, hbar));
        CHECK(m.norm == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(moment_distance(m.to_state(), s) < 1e-11);
    }
}

TEST_CASE("free propagation matches the closed form") {
    const double hbar = 1.0;
    const GaussianState s = plus_state(1.0, 1.0, 0.5, 0.8, hbar);
    const ExtremalSpec spec = extremal_spec_from_state(s, hbar);
    const Grid g = suggest_grid(s, FreeMass{1.3}, 4.0, 8192, 40);
    const WaveFn psi0 = sample_extremal(spec, s.mean_x, s.mean_p, g, hbar);
    for (double t : {0.0, 0.7, 1.5, 4.0}) {
        const Moments m = moments(propagate_free(psi0, 1.3, t));
        const double d = moment_distance(m.to_state(), evolve(s, FreeMass{1.3}, t));
        CHECK(d < (t == 0.0 ? 1e-12 : 1e-10));
    }
}

TEST_CASE("split-step propagation converges to the closed form") {
    const GaussianState s = plus_state(0.8, 1.1, 1.0, 0.0, 1.0);
    const ExtremalSpec spec = extremal_spec_from_state(s, 1.0);
    const Oscillator osc{1.0, 1.0};
    const Grid g = suggest_grid(s, osc, 3.0, 4096, 40);
    const WaveFn psi0 = sample_extremal(spec, s.mean_x, s.mean_p, g, 1.0);
    const auto conv = propagate_osc_converged(psi0, 1.0, 1.0, 3.0, 1e-8, 512);
    CHECK(moment_distance(moments(conv.psi).to_state(), evolve(s, osc, 3.0)) < 1e-8);
    CHECK(conv.change < 1e-8);
    CHECK_THROWS_AS(propagate_osc_converged(psi0, 1.0, 1.0, 3.0, 1e-15, 16, 64),
                    OracleError);
}

TEST_CASE("convergence order of the two splittings") {
    const GaussianState s = plus_state(0.25, 1.0, 2.0, 0.0, 1.0);
    const ExtremalSpec spec = extremal_spec_from_state(s, 1.0);
    const Oscillator osc{1.0, 1.0};
    const Grid g = suggest_grid(s, osc, 2.0, 2048, 40);
    const WaveFn psi0 = sample_extremal(spec, s.mean_x, s.mean_p, g, 1.0);
    const GaussianState exact = evolve(s, osc, 2.0);
    auto err = [&](std::size_t n, Splitting sp) {
        return moment_distance(moments(propagate_osc(psi0, 1.0, 1.0, 2.0, n, sp)).to_state(),
                               exact);
    };
    const double strang = err(32, Splitting::Strang) / err(64, Splitting::Strang);
    CHECK(strang == doctest::Approx(4.0).epsilon(0.05));
    const double yoshida = err(16, Splitting::Yoshida4) / err(32, Splitting::Yoshida4);
    CHECK(yoshida == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("envelope sandwich for a non-Gaussian superposition") {
    // Two displaced packets with opposite kicks. The envelope uses only the
    // second moments, so it must hold for any state.
    const double hbar = 1.0;
    const double m = 1.0;
    const Grid g{-60.0, 60.0, 8192};
    WaveFn psi = sample(g, hbar, [](double x) {
        const auto a = std::exp(std::complex<double>(-(x - 1.5) * (x - 1.5), 0.9 * x));
        const auto b = std::exp(std::complex<double>(-(x + 1.0) * (x + 1.0) / 0.5, -0.4 * x));
        return a + 0.7 * b;
    });
    const double n = norm(psi);
    for (auto &a : psi.amps) {
        a /= std::sqrt(n);
    }
    const Moments m0 = moments(psi);
    const GaussianState s0 = m0.to_state();
    CHECK(s0.vxx * s0.vpp - s0.vxp * s0.vxp > hbar * hbar / 4);
    for (double t : {0.25, 0.5, 1.0, 2.0, 3.0}) {
        const Moments mt = moments(propagate_free(psi, m, t));
        // Second moments of any state follow the linear flow exactly.
        CHECK(mt.vxx == doctest::Approx(evolve(s0, FreeMass{m}, t).vxx).epsilon(1e-9));
        const BoundPair b = rql_free(s0.vxx, s0.vpp, m, hbar, t);
        CHECK(mt.vxx >= b.lower * (1 - 1e-9));
        CHECK(mt.vxx <= b.upper * (1 + 1e-9));
    }
}

TEST_CASE("discretization failures are reported") {
    const ExtremalSpec spec = extremal_spec(1.0, 1.0, 1.0, Sign::Plus);
    // Window too narrow to hold the packet.
    CHECK_THROWS_AS(sample_extremal(spec, 0, 0, Grid{-2.0, 2.0, 1024}, 1.0), OracleError);
    // Momentum support beyond the Nyquist limit.
    const Grid coarse{-20.0, 20.0, 64};
    const WaveFn w = sample(coarse, 1.0, [](double x) {
        return std::exp(std::complex<double>(-4 * x * x, 0.0)) * std::pow(8 / std::numbers::pi, 0.25);
    });
    CHECK_THROWS_AS(propagate_free(w, 1.0, 1.0), OracleError);

    OracleOptions opt;
    opt.n = 64;
    const auto rep = verify_bounds_oracle(spec, 0, 0, FreeMass{1.0}, {}, {0.0, 1.0}, opt);
    CHECK_FALSE(rep.passed);
    CHECK_FALSE(rep.diagnostics.empty());
}

TEST_CASE("oracle report for the contractive free-mass case") {
    const ExtremalSpec spec = extremal_spec(1.0, 1.0, 1.0, Sign::Plus);
    std::vector<double> ts;
    for (int i = 0; i <= 8; ++i) {
        ts.push_back(0.5 * i);
    }
    OracleOptions opt;
    const auto one = verify_bounds_oracle(spec, 0.3, -0.2, FreeMass{1.0}, {}, ts, opt);
    CHECK(one.passed);
    CHECK(one.max_dev_evolution < 1e-8);
    CHECK(one.points.front().dev_evolution < 1e-12);
    opt.threads = 4;
    const auto four = verify_bounds_oracle(spec, 0.3, -0.2, FreeMass{1.0}, {}, ts, opt);
    REQUIRE(four.points.size() == one.points.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(four.points[i].t == one.points[i].t);
        CHECK(four.points[i].oracle.vxx == one.points[i].oracle.vxx);
    }
}

TEST_CASE("oracle report for oscillators, both signs") {
    for (Sign sg : {Sign::Plus, Sign::Minus}) {
        const ExtremalSpec spec = extremal_spec(0.6, 1.4, 1.0, sg);
        const auto rep = verify_bounds_oracle(spec, 0.5, 0.0, DimensionlessOscillator{1.0},
                                              {}, {0.0, 0.5, 1.0, 2.0, 3.0});
        CHECK(rep.passed);
        CHECK(rep.max_dev_saturation < 1e-8);
    }
}

TEST_CASE("csv dump") {
    const WaveFn w = sample(Grid{-1, 1, 4}, 1.0, [](double) { return std::complex<double>(1, 0); });
    std::ostringstream os;
    write_csv(w, os);
    const std::string text = os.str();
    CHECK(text.rfind("x,re,im,abs2\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}
