#include "rql/grid_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "rql/error.hpp"
#include "rql/fft.hpp"

namespace rql::oracle {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

struct Resolved {
    double m = 1.0;
    double omega = 0.0; // 0 for the free mass
    double hbar = 1.0;
};

// A DimensionlessOscillator(w) in quadrature coordinates is the dimensional
// oscillator with m = 1/w, hbar = 1.
Resolved resolve(const SystemModel &model, const PhysConfig &c) {
    validate_model(model);
    if (const auto *f = std::get_if<FreeMass>(&model)) {
        return {f->m, 0.0, c.hbar};
    }
    if (const auto *o = std::get_if<Oscillator>(&model)) {
        return {o->m, o->omega, c.hbar};
    }
    const auto &d = std::get<DimensionlessOscillator>(model);
    if (d.omega == 0.0) {
        throw InvalidArgument("grid oracle needs a non-zero oscillator frequency");
    }
    return {1.0 / d.omega, d.omega, 1.0};
}

// Largest position spread and excursion reachable under the flow, from the
// initial moments only.
struct Reach {
    double centre = 0.0;
    double half_span = 0.0; // of the mean trajectory
    double sigma_x = 0.0;
    double sigma_p = 0.0;
    double mean_p = 0.0;
};

Reach free_reach(const Moments &mo, double m, double t) {
    const double r = t / m;
    const double mx_t = mo.mean_x + r * mo.mean_p;
    const double vxx_t = mo.vxx + 2.0 * r * mo.vxp + r * r * mo.vpp;
    Reach out;
    out.centre = 0.5 * (mo.mean_x + mx_t);
    out.half_span = 0.5 * std::abs(mx_t - mo.mean_x);
    out.sigma_x = std::sqrt(std::max(mo.vxx, vxx_t));
    out.sigma_p = std::sqrt(mo.vpp);
    out.mean_p = std::abs(mo.mean_p);
    return out;
}

// The scaled covariance diag(1, 1/mw) V diag(1, 1/mw) rotates rigidly, so its
// trace bounds every later vxx; likewise for momentum.
Reach osc_reach(const Moments &mo, double m, double omega) {
    const double mw = m * omega;
    Reach out;
    out.centre = 0.0;
    out.half_span = std::hypot(mo.mean_x, mo.mean_p / mw);
    out.sigma_x = std::sqrt(mo.vxx + mo.vpp / (mw * mw));
    out.sigma_p = std::sqrt(mo.vpp + mw * mw * mo.vxx);
    out.mean_p = std::hypot(mo.mean_p, mw * mo.mean_x);
    return out;
}

void check_reach(const Grid &g, double hbar, const Reach &r) {
    const double p_max = kPi * hbar / g.dx();
    if (r.mean_p + 6.0 * r.sigma_p >= p_max) {
        throw OracleError("momentum support not resolved: |<P>| + 6 sigma_P = " +
                          fmt_num(r.mean_p + 6.0 * r.sigma_p) +
                          " >= pi hbar / dx = " + fmt_num(p_max));
    }
    const double lo = r.centre - r.half_span - 8.0 * r.sigma_x;
    const double hi = r.centre + r.half_span + 8.0 * r.sigma_x;
    if (lo < g.x_min || hi > g.x_max) {
        throw OracleError("aliasing guard: the 8 sigma_X window [" +
                          fmt_num(lo) + ", " + fmt_num(hi) +
                          "] leaves the grid [" + fmt_num(g.x_min) + ", " +
                          fmt_num(g.x_max) + "]");
    }
}

std::vector<double> momenta(const Grid &g, double hbar) {
    std::vector<double> p(g.n);
    for (std::size_t k = 0; k < g.n; ++k) {
        p[k] = g.p(k, hbar);
    }
    return p;
}

void check_wavefn(const WaveFn &psi) {
    validate_grid(psi.grid);
    if (psi.amps.size() != psi.grid.n) {
        throw InvalidArgument("wavefunction size does not match its grid");
    }
    if (!(psi.hbar > 0.0)) {
        throw InvalidArgument("hbar must be positive");
    }
}

} // namespace

Grid Grid::centred(double centre, double half_width, std::size_t n) {
    Grid g{centre - half_width, centre + half_width, n};
    validate_grid(g);
    return g;
}

double Grid::p(std::size_t k, double hbar) const {
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    auto j = static_cast<std::ptrdiff_t>(k);
    if (j >= half) {
        j -= static_cast<std::ptrdiff_t>(n);
    }
    return 2.0 * kPi * hbar * static_cast<double>(j) / length();
}

void validate_grid(const Grid &g) {
    if (!std::isfinite(g.x_min) || !std::isfinite(g.x_max) ||
        !(g.x_max > g.x_min)) {
        throw InvalidArgument("grid needs x_max > x_min");
    }
    if (g.n < 2 || (g.n & (g.n - 1)) != 0) {
        throw InvalidArgument("grid size must be a power of two >= 2");
    }
}

cd extremal_amplitude(const ExtremalSpec &spec, double mean_x, double mean_p,
                      double hbar, double x) {
    const cd lambda = spec.param;
    const double pref = std::pow(lambda.real() / (kPi * hbar), 0.25);
    const double d = x - mean_x;
    return pref * std::exp(cd{0.0, mean_p * x / hbar} - lambda * (d * d) / (2.0 * hbar));
}

WaveFn sample(const Grid &g, double hbar, const std::function<cd(double)> &psi) {
    validate_grid(g);
    WaveFn out{g, std::vector<cd>(g.n), hbar};
    for (std::size_t j = 0; j < g.n; ++j) {
        out.amps[j] = psi(g.x(j));
    }
    return out;
}

WaveFn sample_extremal(const ExtremalSpec &spec, double mean_x, double mean_p,
                       const Grid &g, double hbar) {
    validate_spec(spec);
    validate_grid(g);
    const double sigma = std::sqrt(hbar / (2.0 * spec.param.real()));
    if (mean_x - 8.0 * sigma < g.x_min || mean_x + 8.0 * sigma > g.x_max) {
        throw OracleError("grid too narrow: mean_x +- 8 sigma_X = [" +
                          fmt_num(mean_x - 8.0 * sigma) + ", " +
                          fmt_num(mean_x + 8.0 * sigma) + "]");
    }
    WaveFn psi = sample(g, hbar, [&](double x) {
        return extremal_amplitude(spec, mean_x, mean_p, hbar, x);
    });
    const double deficit = std::abs(norm(psi) - 1.0);
    if (deficit > 1e-8) {
        throw OracleError("sampled norm misses 1 by " + fmt_num(deficit) +
                          " (grid too coarse or too narrow)");
    }
    return psi;
}

double norm(const WaveFn &psi) {
    check_wavefn(psi);
    double s = 0.0;
    for (const auto &a : psi.amps) {
        s += std::norm(a);
    }
    return s * psi.grid.dx();
}

Moments moments(const WaveFn &psi) {
    check_wavefn(psi);
    const Grid &g = psi.grid;
    const double dx = g.dx();

    Moments mo;
    mo.norm = norm(psi);
    if (std::abs(mo.norm - 1.0) > 1e-6) {
        throw OracleError("wavefunction norm " + fmt_num(mo.norm) +
                          " deviates from 1 by more than 1e-6");
    }

    double sx = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        sx += g.x(j) * std::norm(psi.amps[j]);
    }
    mo.mean_x = sx * dx / mo.norm;
    double sxx = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double d = g.x(j) - mo.mean_x;
        sxx += d * d * std::norm(psi.amps[j]);
    }
    mo.vxx = sxx * dx / mo.norm;

    const Fft fft(g.n);
    std::vector<cd> phi = psi.amps;
    fft.forward(phi);
    const auto p = momenta(g, psi.hbar);
    double w = 0.0;
    double sp = 0.0;
    for (std::size_t k = 0; k < g.n; ++k) {
        const double a = std::norm(phi[k]);
        w += a;
        sp += p[k] * a;
    }
    mo.mean_p = sp / w;
    double spp = 0.0;
    for (std::size_t k = 0; k < g.n; ++k) {
        const double d = p[k] - mo.mean_p;
        spp += d * d * std::norm(phi[k]);
    }
    mo.vpp = spp / w;

    // (P - <P>) psi, back in position space.
    for (std::size_t k = 0; k < g.n; ++k) {
        phi[k] *= (p[k] - mo.mean_p) / static_cast<double>(g.n);
    }
    fft.backward(phi);
    double sxp = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double d = g.x(j) - mo.mean_x;
        sxp += (std::conj(d * psi.amps[j]) * phi[j]).real();
    }
    mo.vxp = sxp * dx / mo.norm;
    return mo;
}

WaveFn propagate_free(const WaveFn &psi, double m, double t) {
    check_wavefn(psi);
    if (!(m > 0.0)) {
        throw InvalidArgument("mass must be positive");
    }
    if (!std::isfinite(t)) {
        throw InvalidArgument("time must be finite");
    }
    check_reach(psi.grid, psi.hbar, free_reach(moments(psi), m, t));
    if (t == 0.0) {
        return psi;
    }
    const Grid &g = psi.grid;
    const Fft fft(g.n);
    WaveFn out = psi;
    fft.forward(out.amps);
    const double inv_n = 1.0 / static_cast<double>(g.n);
    for (std::size_t k = 0; k < g.n; ++k) {
        const double p = g.p(k, psi.hbar);
        out.amps[k] *= std::polar(inv_n, -p * p * t / (2.0 * m * psi.hbar));
    }
    fft.backward(out.amps);
    return out;
}

WaveFn propagate_osc(const WaveFn &psi, double m, double omega, double t,
                     std::size_t n_steps, Splitting splitting) {
    check_wavefn(psi);
    if (!(m > 0.0) || !(omega >= 0.0) || !std::isfinite(omega)) {
        throw InvalidArgument("need m > 0 and omega >= 0");
    }
    if (!std::isfinite(t)) {
        throw InvalidArgument("time must be finite");
    }
    if (n_steps < 1) {
        throw InvalidArgument("n_steps must be at least 1");
    }
    const Moments mo = moments(psi);
    check_reach(psi.grid, psi.hbar,
                omega == 0.0 ? free_reach(mo, m, t) : osc_reach(mo, m, omega));

    const Grid &g = psi.grid;
    const double hbar = psi.hbar;
    const double h = t / static_cast<double>(n_steps);
    const double inv_n = 1.0 / static_cast<double>(g.n);

    // Strang substeps per step, as fractions of h. The fourth-order variant
    // is the symmetric triple jump w1, w0, w1 with 2 w1 + w0 = 1.
    std::vector<double> frac{1.0};
    if (splitting == Splitting::Yoshida4) {
        const double c = std::cbrt(2.0);
        const double w1 = 1.0 / (2.0 - c);
        frac = {w1, 1.0 - 2.0 * w1, w1};
    }

    std::map<double, std::vector<cd>> kicks;
    auto kick = [&](double f) -> const std::vector<cd> & {
        auto [it, fresh] = kicks.try_emplace(f);
        if (fresh) {
            it->second.resize(g.n);
            for (std::size_t j = 0; j < g.n; ++j) {
                const double x = g.x(j);
                const double v = 0.5 * m * omega * omega * x * x;
                it->second[j] = std::polar(1.0, -v * f * h / hbar);
            }
        }
        return it->second;
    };
    std::map<double, std::vector<cd>> drifts;
    auto drift = [&](double f) -> const std::vector<cd> & {
        auto [it, fresh] = drifts.try_emplace(f);
        if (fresh) {
            it->second.resize(g.n);
            for (std::size_t k = 0; k < g.n; ++k) {
                const double p = g.p(k, hbar);
                it->second[k] = std::polar(inv_n, -p * p * f * h / (2.0 * m * hbar));
            }
        }
        return it->second;
    };

    const Fft fft(g.n);
    WaveFn out = psi;
    auto &a = out.amps;
    auto apply = [&](const std::vector<cd> &phase) {
        for (std::size_t j = 0; j < g.n; ++j) {
            a[j] *= phase[j];
        }
    };
    // Adjacent half kicks of consecutive substeps merge into one kick.
    const std::size_t subs = frac.size();
    const std::size_t total = n_steps * subs;
    apply(kick(0.5 * frac[0]));
    for (std::size_t s = 0; s < total; ++s) {
        const double f = frac[s % subs];
        fft.forward(a);
        apply(drift(f));
        fft.backward(a);
        const double next = s + 1 == total ? 0.0 : frac[(s + 1) % subs];
        apply(kick(0.5 * (f + next)));
    }
    return out;
}

ConvergedPropagation propagate_osc_converged(const WaveFn &psi, double m,
                                             double omega, double t,
                                             double tol, std::size_t start,
                                             std::size_t cap,
                                             Splitting splitting) {
    if (start < 1 || cap < start) {
        throw InvalidArgument("need 1 <= start <= cap");
    }
    ConvergedPropagation cur{propagate_osc(psi, m, omega, t, start, splitting), start,
                             0.0};
    GaussianState prev = moments(cur.psi).to_state();
    for (std::size_t n = 2 * start; n <= cap; n *= 2) {
        WaveFn next = propagate_osc(psi, m, omega, t, n, splitting);
        const GaussianState now = moments(next).to_state();
        cur = {std::move(next), n, moment_distance(now, prev)};
        if (cur.change < tol) {
            return cur;
        }
        prev = now;
    }
    throw OracleError("split-step did not converge by n_steps = " +
                      std::to_string(cap) + " (last moment change " +
                      fmt_num(cur.change) + ", tolerance " + fmt_num(tol) + ")");
}

double moment_distance(const GaussianState &a, const GaussianState &ref) {
    const double sx = std::sqrt(ref.vxx);
    const double sp = std::sqrt(ref.vpp);
    return std::max({std::abs(a.mean_x - ref.mean_x) / sx,
                     std::abs(a.mean_p - ref.mean_p) / sp,
                     std::abs(a.vxx - ref.vxx) / ref.vxx,
                     std::abs(a.vpp - ref.vpp) / ref.vpp,
                     std::abs(a.vxp - ref.vxp) / (sx * sp)});
}

Grid suggest_grid(const GaussianState &s0, const SystemModel &model,
                  double t_max, std::size_t n, double domain_sigmas) {
    validate_grid(Grid{-1.0, 1.0, n});
    if (!(domain_sigmas > 0.0)) {
        throw InvalidArgument("domain_sigmas must be positive");
    }
    const Resolved sys = resolve(model, PhysConfig{});
    const Moments mo{1.0, s0.mean_x, s0.mean_p, s0.vxx, s0.vpp, s0.vxp};
    const Reach r = sys.omega == 0.0 ? free_reach(mo, sys.m, t_max)
                                     : osc_reach(mo, sys.m, sys.omega);
    const double sigma = std::max(std::sqrt(mo.vxx), r.sigma_x);
    return Grid::centred(r.centre, r.half_span + domain_sigmas * sigma, n);
}

void write_csv(const WaveFn &psi, std::ostream &out) {
    check_wavefn(psi);
    const auto old = out.precision(17);
    out << "x,re,im,abs2\n";
    for (std::size_t j = 0; j < psi.grid.n; ++j) {
        const auto &a = psi.amps[j];
        out << psi.grid.x(j) << ',' << a.real() << ',' << a.imag() << ','
            << std::norm(a) << '\n';
    }
    out.precision(old);
}

namespace {

std::vector<Moments> run_free(const WaveFn &psi0, double m,
                              const std::vector<double> &ts, unsigned threads) {
    std::vector<Moments> out(ts.size());
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < ts.size(); i += stride) {
            out[i] = moments(propagate_free(psi0, m, ts[i]));
        }
    };
    const std::size_t k = std::max<std::size_t>(
        1, std::min<std::size_t>(threads, ts.size()));
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 1; w < k; ++w) {
        jobs.push_back(std::async(std::launch::async, work, w, k));
    }
    work(0, k);
    for (auto &j : jobs) {
        j.get();
    }
    return out;
}

// Chains the split-step through the sorted times; the step size tracks
// opt.osc_steps over the full span.
std::vector<Moments> run_osc(const WaveFn &psi0, const Resolved &sys,
                             const std::vector<double> &ts,
                             const OracleOptions &opt) {
    std::vector<std::size_t> order(ts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ts[a] < ts[b]; });
    const double span = ts[order.back()];

    std::vector<Moments> out(ts.size());
    WaveFn psi = psi0;
    double now = 0.0;
    for (std::size_t idx : order) {
        const double dt = ts[idx] - now;
        if (dt > 0.0) {
            const auto start = static_cast<std::size_t>(std::max(
                1.0, std::ceil(static_cast<double>(opt.osc_steps) * dt / span)));
            psi = propagate_osc_converged(psi, sys.m, sys.omega, dt,
                                          opt.osc_tolerance, start,
                                          std::max(start, opt.osc_step_cap),
                                          opt.splitting)
                      .psi;
            now = ts[idx];
        }
        out[idx] = moments(psi);
    }
    return out;
}

} // namespace

OracleReport verify_bounds_oracle(const ExtremalSpec &spec, double mean_x,
                                  double mean_p, const SystemModel &model,
                                  const PhysConfig &c,
                                  const std::vector<double> &t_grid,
                                  const OracleOptions &opt) {
    validate_config(c);
    validate_spec(spec);
    if (t_grid.empty()) {
        throw InvalidArgument("time grid is empty");
    }
    for (double t : t_grid) {
        if (!std::isfinite(t) || t < 0.0) {
            throw InvalidArgument("oracle times must be finite and >= 0");
        }
    }
    if (!(opt.tolerance > 0.0) || !(opt.domain_sigmas > 0.0)) {
        throw InvalidArgument("tolerance and domain_sigmas must be positive");
    }
    const Resolved sys = resolve(model, c);
    const GaussianState s0 = gaussian_from_extremal(spec, mean_x, mean_p, sys.hbar);
    const double t_max = *std::max_element(t_grid.begin(), t_grid.end());

    OracleReport rep;
    std::vector<Moments> got;
    try {
        const Grid g = suggest_grid(s0, model, t_max, opt.n, opt.domain_sigmas);
        const WaveFn psi0 = sample_extremal(spec, mean_x, mean_p, g, sys.hbar);
        got = sys.omega == 0.0 ? run_free(psi0, sys.m, t_grid, opt.threads)
                               : run_osc(psi0, sys, t_grid, opt);
    } catch (const OracleError &e) {
        rep.diagnostics.emplace_back(e.what());
        rep.passed = false;
        return rep;
    }

    const double root = correlation_root(s0.vxx, s0.vpp, sys.hbar);
    rep.min_sandwich_slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        OraclePoint pt;
        pt.t = t_grid[i];
        pt.oracle = got[i];
        pt.expected = evolve(s0, model, pt.t, c);
        pt.envelope = position_envelope(model, s0.vxx, s0.vpp, c, pt.t);
        pt.dev_evolution = moment_distance(pt.oracle.to_state(), pt.expected);

        // Which side the pure state sits on: for the oscillator it follows
        // the sign of sin(2 omega t).
        bool lower_side = spec.sign == Sign::Plus;
        if (sys.omega != 0.0 && std::sin(2.0 * sys.omega * pt.t) < 0.0) {
            lower_side = !lower_side;
        }
        const double side = (root == 0.0 || lower_side) ? pt.envelope.lower
                                                        : pt.envelope.upper;
        pt.dev_saturation = std::abs(pt.oracle.vxx - side) / side;
        pt.sandwich_slack = std::min(pt.oracle.vxx - pt.envelope.lower,
                                     pt.envelope.upper - pt.oracle.vxx) /
                            pt.oracle.vxx;

        rep.max_dev_evolution = std::max(rep.max_dev_evolution, pt.dev_evolution);
        rep.max_dev_saturation =
            std::max(rep.max_dev_saturation, pt.dev_saturation);
        rep.min_sandwich_slack = std::min(rep.min_sandwich_slack, pt.sandwich_slack);
        rep.points.push_back(pt);
    }
    if (rep.max_dev_evolution > opt.tolerance) {
        rep.diagnostics.push_back("oracle vs Gaussian evolution deviation " +
                                  fmt_num(rep.max_dev_evolution) +
                                  " exceeds tolerance");
    }
    if (rep.max_dev_saturation > opt.tolerance) {
        rep.diagnostics.push_back("envelope saturation deviation " +
                                  fmt_num(rep.max_dev_saturation) +
                                  " exceeds tolerance");
    }
    if (rep.min_sandwich_slack < -opt.tolerance) {
        rep.diagnostics.push_back("envelope violated: slack " +
                                  fmt_num(rep.min_sandwich_slack));
    }
    rep.passed = rep.diagnostics.empty();
    return rep;
}

OracleReport verify_bounds_oracle(const GaussianState &s,
                                  const SystemModel &model,
                                  const PhysConfig &c,
                                  const std::vector<double> &t_grid,
                                  const OracleOptions &opt) {
    const double hbar = effective_hbar(model, c);
    return verify_bounds_oracle(extremal_spec_from_state(s, hbar), s.mean_x,
                                s.mean_p, model, c, t_grid, opt);
}

} // namespace rql::oracle
