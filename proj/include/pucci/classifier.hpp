#pragma once

#include <cstddef>
#include <string_view>

#include "pucci/constants.hpp"
#include "pucci/grid.hpp"

namespace pucci {

// Asymptotic class of a positive radial solution near r = 0:
//   PowerK       u ~ K r^{-2/(p-1)}            (exact-power branch)
//   TauPlus      u ~ c1 r^{-tau_plus}
//   TauMinus     u ~ c2 r^{-tau_minus}
//   LogCritical  u ~ Kbar r^{-tau_minus} (-log r)^{-tau_minus/2}   (p == p**)
enum class AsymptoticVariant { PowerK, TauPlus, TauMinus, LogCritical };

std::string_view to_string(AsymptoticVariant v);
AsymptoticVariant variant_from_string(std::string_view name);

struct ClassifyDiagnostics {
    double slope = 0;              // OLS slope of log u vs log r on the window
    double slope_tol = 0;          // matching tolerance actually used
    double fit_residual = 0;       // relative rms spread of the compensated tail
    double secondary_correction = 0; // signed relative deviation at the deepest node
    double window_lo = 0;          // tail window [window_lo, window_hi]
    double window_hi = 0;
    std::size_t window_nodes = 0;
    bool regime_consistent = true; // variant admissible for the regime of p
};

struct AsymptoticClass {
    AsymptoticVariant variant;
    double constant = 0;           // fitted K / c1 / c2 / Kbar, always > 0
    ClassifyDiagnostics diagnostics;
};

struct ClassifyOptions {
    // Depth gate: the grid must reach r <= max_r_min or TailTooShort is
    // thrown.  Callers classifying certified scheme limits may relax it;
    // the slope window then sits at the grid's own deepest decade.
    double max_r_min = 1e-6;
    double eq_tol = 1e-12;          // relative tolerance deciding p == p**
    std::size_t min_window_nodes = 10;
    bool check_regime = false;      // throw RegimeMismatch on an impossible variant
};

// Match the log-log tail slope against the candidate exponents
// {-2/(p-1) when K exists, -tau_plus, -tau_minus} and fit the limit
// constant by a geometric mean of the compensated samples.  At p == p**
// the regime decides first and the -tau_minus branch is split between
// TauMinus and LogCritical by fitting r^{tau_minus}(-log r)^{tau_minus/2} u
// for a constant limit.  Throws NonPositiveSample, TailTooShort,
// AmbiguousClass (no candidate within slope_tol, or two within
// slope_tol/2), RegimeMismatch, BadInput.
AsymptoticClass classify(const RadialFunction& u, const ConstantSet& cs,
                         double tail_decades = 3.0,
                         const ClassifyOptions& opt = {});

struct BoundsOptions {
    double mono_tol = 1e-6;      // relative slack for the r^{tau_minus} u check
    double growth_tol = 0.02;    // |slope| slack before u r^{2/(p-1)} counts as growing
    double bound_slack = 1e-9;   // relative slack on the fitted log-half bound
    double tail_decades = 3.0;   // fitting window, measured from the deepest node
    double eq_tol = 1e-12;
};

struct BoundsReport {
    double power_constant = 0;    // sup over nodes of u r^{2/(p-1)}
    double power_slope = 0;       // tail slope of u r^{2/(p-1)} (>= -growth_tol when bounded)
    double head_peak = 0;         // max u over the shallowest decade
    double tail_peak = 0;         // max u over the deepest decade
    bool unbounded_observed = false; // tail_peak > head_peak; reported, never thrown
    bool v_check_applies = false; // p in [p*, p**]: r^{tau_minus} u must be non-decreasing
    double v_worst_drop = 0;      // most negative relative increment of r^{tau_minus} u
    bool log_half_applies = false; // p == p**
    double log_half_constant = 0; // fitted C with u <= C [(-log r)^{1/2} r]^{-tau_minus}
};

// Finite-sample renderings of the a-priori bounds: (i) u r^{2/(p-1)} stays
// bounded toward r = 0, (ii) u is observed unbounded (reported only),
// (iii) for p* <= p <= p**, r^{tau_minus} u is non-decreasing in r within
// mono_tol, (iv) at p == p** the log-half envelope holds with the fitted
// constant.  All failed checks are collected into one BoundViolation naming
// each check, node and quantity.
BoundsReport check_asymptotic_bounds(const RadialFunction& u,
                                     const ConstantSet& cs,
                                     const BoundsOptions& opt = {});

} // namespace pucci
