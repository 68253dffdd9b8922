#pragma once

#include "rql/gaussian.hpp"

namespace rql {

/// Two-sided envelope on a variance at time t.
struct BoundPair {
    double t = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

/// The two rewritten forms of the free-mass lower envelope.
struct AltForms {
    /// (hbar / 2 sigma_P)^2 + (sigma_P / m)^2 (t - t_M/2)^2
    double vertex_form = 0.0;
    /// (t/m)(2 sigma_X sigma_P - root) + (t sigma_P / m - sigma_X)^2
    double product_form = 0.0;
};

/// sqrt(4 vxx0 vpp0 - hbar^2). Arguments within 4e-12 hbar^2 below zero are
/// clamped to zero; anything lower throws InvalidArgument.
double correlation_root(double vxx0, double vpp0, double hbar);

/// Free-mass envelope on sigma^2(X(t)) for t >= 0.
BoundPair rql_free(double vxx0, double vpp0, double m, double hbar, double t);

AltForms rql_free_alt_forms(double vxx0, double vpp0, double m, double hbar,
                            double t);

/// Time up to which the optimal contractive free-mass state stays at or below
/// its initial position variance. Zero for minimum-uncertainty input.
double t_contract_free(double vxx0, double vpp0, double m, double hbar);

/// Dimensionless oscillator envelopes on sigma^2(x) and sigma^2(p) at phase
/// omega*t.
BoundPair rql_osc_x(double vxx0, double vpp0, double phase);
BoundPair rql_osc_p(double vxx0, double vpp0, double phase);

/// Oscillator envelope on sigma^2(X(t)) in dimensional units.
BoundPair rql_osc_dimensional(double vXX0, double vPP0, double m,
                              double omega, double hbar, double t);

/// Contractivity horizon omega*t_M' in (0, pi) for the dimensionless
/// oscillator, from the two-argument arctangent. Returns 0 for a minimal
/// uncertainty product (no contraction).
double t_contract_osc(double vxx0, double vpp0);

/// hbar t / m, the heuristic standard quantum limit. A reference line, not a
/// bound.
double sql_reference(double m, double hbar, double t);

/// Envelope on sigma^2(X(t)) for any model; t and the result are in the
/// model's own units (phase time for the dimensionless oscillator).
BoundPair position_envelope(const SystemModel &model, double vxx0,
                            double vpp0, const PhysConfig &c, double t);

/// Envelope on sigma^2(P(t)). The free-mass momentum variance is conserved,
/// so lower = upper = vpp0 there; the dimensional oscillator goes through the
/// quadrature scaling.
BoundPair momentum_envelope(const SystemModel &model, double vxx0,
                            double vpp0, const PhysConfig &c, double t);

/// Contractivity horizon as a time in the model's units: t_M for the free
/// mass, t_M' = (omega t_M') / omega for the oscillators.
double contraction_horizon(const SystemModel &model, double vxx0, double vpp0,
                           const PhysConfig &c);

} // namespace rql
