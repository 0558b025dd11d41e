#pragma once

#include <cstddef>
#include <utility>

#include "pucci/grid.hpp"
#include "pucci/params.hpp"

namespace pucci {

struct ComparisonOptions {
    double residual_tol = 1e-12;  // relative sign slack, mirrors certify_sign
    double ratio_tol = 1e-8;      // discrete slack on the comparison conclusion
    double boundary_tol = 1e-12;  // relative slack for u <= v on the boundary
    double growth_tol = 1e-12;    // relative slack on the growth envelopes
};

struct HypothesisCheck {
    double worst_sub_residual = 0;   // min of residual_main(u)/scale, want >= -tol
    double worst_super_residual = 0; // max of residual_main(v)/scale, want <= tol
    double boundary_margin = 0;      // min of (v-u)/v over the boundary nodes
    bool growth_checked = false;     // ball mode only
    double lower_growth_margin = 0;  // min of (v - c1g r^-m)/(c1g r^-m)
    double upper_growth_margin = 0;  // min of (c2g r^-m - max(u,v))/(c2g r^-m)
};

struct ComparisonReport {
    double sup_ratio = 0;        // max over nodes of u/v
    double boundary_ratio = 0;   // max of u/v over the boundary nodes
    std::size_t worst_node = 0;  // argmax of u/v
    double worst_r = 0;
    HypothesisCheck hypothesis_check;
    bool verdict = false;        // sup_ratio <= max(1, boundary_ratio)(1 + ratio_tol)
};

// Comparison away from the singularity: u sub-solution, v super-solution on
// a common grid [a, b], ordered u <= v at both endpoints.  Positivity,
// residual signs and the boundary ordering are verified first and raise
// HypothesisViolation before any verdict is formed.
ComparisonReport check_annulus(const RadialFunction& u, const RadialFunction& v,
                               const ProblemParams& prm,
                               const ComparisonOptions& opt = {});

// Comparison up to the singularity on (0, r0], r0 = the common grid's outer
// radius, ordered only there.  Additionally needs the growth envelopes
// c1g r^{-2/(p-1)} <= v and u, v <= c2g r^{-2/(p-1)} at every node; their
// failure raises GrowthHypothesisViolation naming the offending node.
ComparisonReport check_ball(const RadialFunction& u, const RadialFunction& v,
                            const ProblemParams& prm, double c1g, double c2g,
                            const ComparisonOptions& opt = {});

// Tightest envelope constants for check_ball: {min of v r^{2/(p-1)},
// max of both u r^{2/(p-1)} and v r^{2/(p-1)}}.
std::pair<double, double> growth_constants(const RadialFunction& u,
                                           const RadialFunction& v,
                                           const ProblemParams& prm);

} // namespace pucci
