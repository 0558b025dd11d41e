#pragma once

#include <string_view>
#include <vector>

#include "pucci/constants.hpp"
#include "pucci/grid.hpp"

namespace pucci {

// Dirichlet problem on the annulus [a, 1]:
//   -M+(D^2 v) + |v|^{p-1} v = f,   v(a) = va, v(1) = vb,
// with f >= 0 sampled on the grid nodes.  The singular Hardy term enters
// only through f, frozen from the previous sweep of the approximating
// scheme; the problem itself is proper and admits discrete comparison.
struct AnnulusProblem {
    LogGrid grid;              // nodes spanning [a, 1], 0 < a < 1
    std::vector<double> f;     // per-node source, >= 0
    double va = 0, vb = 0;     // boundary values, >= 0
    ProblemParams prm;         // ellipticity and exponent; mu is not read here

    // optional per-node data: Newton starting profile and the bracket used
    // by the Picard fallback; empty vectors mean "none"
    std::vector<double> init, sub, super;
};

struct BVPOptions {
    double newton_tol = 1e-11; // componentwise relative residual target
    int max_newton = 60;       // outer iterations (Newton steps or Picard sweeps)
    int max_damping = 30;      // step halvings per Newton iteration
};

// Damped semismooth Newton on second-order log-grid differences with the
// Pucci branch weights frozen per iteration; one Picard sweep with lagged
// absorption (clamped into [sub, super] when given) whenever damping
// stalls.  The assembled Jacobian must be an M-matrix; a log step too
// coarse for the off-diagonal sign pattern raises NonMonotoneOperator,
// a stalled iteration raises NewtonDivergence.
RadialFunction solve_annulus_bvp(const AnnulusProblem& prob, const BVPOptions& opt = {});

enum class SchemeCase { TauPlus, TauMinus, LogCritical };

std::string_view to_string(SchemeCase c);
SchemeCase scheme_case_from_string(std::string_view name);   // BadInput

// The shrinking-annulus sequence runs on the dyadic family r_n = 2^{-n},
// so every inner radius lands exactly on a node of every later grid.
struct SchemeOptions {
    int n_start = 1;
    int n_max = 24;              // deepest annulus [2^{-n_max}, 1]
    int nodes_per_octave = 128;
    double mono_tol = 1e-10;     // relative slack for iterate monotonicity
    double bracket_tol = 1e-9;   // relative slack for sub/super bracketing
    double scheme_tol = 1e-8;    // stop when consecutive iterates agree to this
    BVPOptions bvp;
    bool keep_iterates = true;
};

struct SchemeCertificate {
    bool monotone = false;
    bool bracketed = false;
    double residual_norm = 0;   // relative 3-point residual of the full equation
    double mono_worst = 0;      // most negative relative increment seen
    double bracket_worst = 0;   // most negative relative bracket margin seen
    double delta_final = 0;     // last relative sup-distance between iterates
    int n_final = 0;            // deepest annulus index reached
    bool converged = false;     // stopped by scheme_tol rather than n_max
};

struct SchemeResult {
    std::vector<RadialFunction> iterates;   // empty unless keep_iterates
    RadialFunction limit;                   // deepest iterate, on [2^{-n_final}, 1]
    SchemeCertificate certificate;
};

// Constructive existence run: solve the Dirichlet problem on [2^{-n}, 1]
// with the singular term frozen at the sub-barrier on the newly added
// octave and at the previous iterate elsewhere; boundary values are the
// sub-barrier's own.  Certifies iterate monotonicity and the sub/super
// bracket nodewise; violations beyond the tolerances raise
// MonotonicityViolation / BracketViolation naming iteration and node.
SchemeResult run_scheme(SchemeCase c, const ConstantSet& cs, const SchemeOptions& opt = {});

// Portion of the limit the iteration has actually stabilized: the suffix of
// nodes where the last two retained iterates agree within agree_tol
// relative, with the outer Dirichlet node dropped.  The freshly released
// inner octaves carry a boundary layer that would contaminate tail fits.
// Needs keep_iterates; InsufficientTail when fewer than two iterates were
// kept or fewer than five nodes are stable.
RadialFunction stable_tail(const SchemeResult& res, double agree_tol = 1e-2);

} // namespace pucci
