#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "pucci/params.hpp"

namespace pucci {

// Asymptotic regime of the exponent p relative to the critical pair
// p_star < p_star_star.  Ordered: Subcritical < Intermediate < LogCritical
// < Supercritical; regime_rank exposes that order for monotonicity checks.
enum class RegimeKind { Subcritical, Intermediate, LogCritical, Supercritical };

int regime_rank(RegimeKind k) noexcept;
std::string_view to_string(RegimeKind k);

struct Regime {
    RegimeKind kind;
    double eq_tol;   // relative tolerance that decided p == p_star_star
};

// Dimension-like and spectral constants attached to one parameter set.
// Fields that require a gate the parameters do not satisfy are NaN
// (or an empty optional for K); nothing here throws except the hard
// precondition mu <= lambda_bar.
struct ConstantSet {
    ProblemParams prm;

    double Ntilde_plus = 0;        // (lambda/Lambda)(N-1) + 1
    double Ntilde_minus = 0;       // (Lambda/lambda)(N-1) + 1
    double tau = 0;                // (Ntilde_plus - 2)/2
    double tau_minus_op = 0;       // (Ntilde_minus - 2)/2, minus-operator analogue
    double lambda_bar = 0;         // Lambda tau^2, critical Hardy weight
    double lambda_bar_minus = 0;   // lambda tau_minus_op^2

    // roots of x^2 - 2 tau x + mu/Lambda = 0; equal to tau when mu == lambda_bar
    double tau_plus = 0;
    double tau_minus = 0;

    double p_star = 0;             // 1 + 2/tau_plus       (NaN if tau_plus <= 0)
    double p_star_star = 0;        // 1 + 2/tau_minus      (NaN if tau_minus <= 0)
    double K_bar = 0;              // [Lambda tau_minus (tau - tau_minus)]^(tau_minus/2)

    double lambda1 = 0;            // 2/(p-1) - tau_plus   (NaN if p unset)
    double lambda2 = 0;            // 2/(p-1) - tau_minus
    std::optional<double> K;       // [Lambda lambda1 lambda2]^(1/(p-1)) when lambda1*lambda2 > 0

    bool degenerate = false;       // mu == lambda_bar exactly
    bool in_regime = false;        // 0 < mu < lambda_bar and p > 1
};

// Throws InvalidEllipticity / MuAboveEigenvalue.  mu == lambda_bar is
// accepted and flagged degenerate with tau_plus == tau_minus == tau.
ConstantSet derive_constants(const ProblemParams& prm);

// {p_star, p_star_star}; DegenerateTau unless 0 < mu < lambda_bar.
std::pair<double, double> critical_exponents(const ConstantSet& cs);

// Amplitude of the exact power solution K r^{-2/(p-1)}.
// KUndefined when p_star <= p <= p_star_star, SublinearExponent when p <= 1.
double explicit_K(double p, const ConstantSet& cs);

// Amplitude of the log-corrected critical profile at p == p_star_star.
double log_critical_Kbar(const ConstantSet& cs);

// Regime of p.  Equality with p_star_star is decided first, at relative
// tolerance eq_tol, so LogCritical wins over the adjacent open regimes.
Regime classify_regime(double p, const ConstantSet& cs, double eq_tol = 1e-12);

// Closed-form half-eigenfunction Phi(r) = (-log r) r^{-tau_exp} together
// with its first two radial derivatives.
struct Eigenfunction {
    double tau_exp = 0;
    void eval(double r, double& u, double& du, double& ddu) const;
};

struct Eigenpair {
    double lambda_bar = 0;
    Eigenfunction phi;
};

// Principal pair for the chosen operator: (lambda_bar, Phi+) for Plus,
// (lambda_bar_minus, Phi-) for Minus.
Eigenpair principal_eigenpair(const ProblemParams& prm, PucciSign sign = PucciSign::Plus);

} // namespace pucci
