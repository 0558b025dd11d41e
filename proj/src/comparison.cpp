#include "pucci/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "pucci/errors.hpp"
#include "pucci/radial_pucci.hpp"

namespace pucci {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

void validate_pair(const RadialFunction& u, const RadialFunction& v,
                   const ProblemParams& prm, const ComparisonOptions& opt) {
    if (!(opt.residual_tol > 0) || !(opt.ratio_tol > 0) || !(opt.boundary_tol > 0) ||
        !(opt.growth_tol > 0))
        fail(ErrorCode::BadInput, "comparison tolerances must be positive");
    if (!prm.has_p() || !(prm.p > 1.0))
        fail(ErrorCode::SublinearExponent, "comparison needs p > 1");
    if (!(u.grid == v.grid))
        fail(ErrorCode::BadInput, "comparison inputs must share one grid");
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!(u.u[i] > 0.0) || !(v.u[i] > 0.0))
            fail(ErrorCode::HypothesisViolation,
                 "comparison inputs must be positive; node " + std::to_string(i) +
                     " (r=" + fmt(u.grid[i]) + ") is not");
}

// worst signed relative residuals: min for the sub side, max for the super
void residual_signs(const RadialFunction& u, const RadialFunction& v,
                    const ProblemParams& prm, const ComparisonOptions& opt,
                    HypothesisCheck& hc) {
    const std::vector<double> ru = residual_main(u, prm);
    const std::vector<double> su = residual_main_scale(u, prm);
    const std::vector<double> rv = residual_main(v, prm);
    const std::vector<double> sv = residual_main_scale(v, prm);
    double worst_sub = 0, worst_super = 0;
    std::size_t at_sub = 0, at_super = 0;
    for (std::size_t i = 0; i < ru.size(); ++i) {
        const double a = ru[i] / std::max(su[i], 1e-300);
        const double b = rv[i] / std::max(sv[i], 1e-300);
        if (a < worst_sub) {
            worst_sub = a;
            at_sub = i;
        }
        if (b > worst_super) {
            worst_super = b;
            at_super = i;
        }
    }
    hc.worst_sub_residual = worst_sub;
    hc.worst_super_residual = worst_super;
    if (worst_sub < -opt.residual_tol)
        fail(ErrorCode::HypothesisViolation,
             "u is not a sub-solution: relative residual " + fmt(worst_sub) +
                 " at node " + std::to_string(at_sub) + " (r=" + fmt(u.grid[at_sub]) + ")");
    if (worst_super > opt.residual_tol)
        fail(ErrorCode::HypothesisViolation,
             "v is not a super-solution: relative residual " + fmt(worst_super) +
                 " at node " + std::to_string(at_super) + " (r=" +
                 fmt(v.grid[at_super]) + ")");
}

ComparisonReport form_verdict(const RadialFunction& u, const RadialFunction& v,
                              double boundary_ratio, const ComparisonOptions& opt,
                              HypothesisCheck hc) {
    ComparisonReport rep;
    rep.hypothesis_check = hc;
    rep.boundary_ratio = boundary_ratio;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double q = u.u[i] / v.u[i];
        if (q > rep.sup_ratio) {
            rep.sup_ratio = q;
            rep.worst_node = i;
        }
    }
    rep.worst_r = u.grid[rep.worst_node];
    rep.verdict = rep.sup_ratio <= std::max(1.0, rep.boundary_ratio) * (1.0 + opt.ratio_tol);
    return rep;
}

} // namespace

ComparisonReport check_annulus(const RadialFunction& u, const RadialFunction& v,
                               const ProblemParams& prm, const ComparisonOptions& opt) {
    validate_pair(u, v, prm, opt);
    HypothesisCheck hc;
    residual_signs(u, v, prm, opt, hc);

    const std::size_t last = u.size() - 1;
    double bmargin = 1.0;
    for (std::size_t i : {std::size_t(0), last}) {
        const double margin = (v.u[i] - u.u[i]) / v.u[i];
        bmargin = std::min(bmargin, margin);
        if (u.u[i] > v.u[i] * (1.0 + opt.boundary_tol))
            fail(ErrorCode::HypothesisViolation,
                 "boundary ordering u <= v fails at r=" + fmt(u.grid[i]) + ": u=" +
                     fmt(u.u[i]) + " v=" + fmt(v.u[i]));
    }
    hc.boundary_margin = bmargin;

    const double bratio =
        std::max(u.u[0] / v.u[0], u.u[last] / v.u[last]);
    return form_verdict(u, v, bratio, opt, hc);
}

ComparisonReport check_ball(const RadialFunction& u, const RadialFunction& v,
                            const ProblemParams& prm, double c1g, double c2g,
                            const ComparisonOptions& opt) {
    validate_pair(u, v, prm, opt);
    if (!(c1g > 0.0) || !(c2g > 0.0) || !(c1g <= c2g))
        fail(ErrorCode::BadInput, "growth constants need 0 < c1g <= c2g");

    // growth envelopes first: without them the principle does not apply
    HypothesisCheck hc;
    hc.growth_checked = true;
    const double m = 2.0 / (prm.p - 1.0);
    double lo_margin = 1.0, hi_margin = 1.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double env_lo = c1g * std::pow(u.grid[i], -m);
        const double env_hi = c2g * std::pow(u.grid[i], -m);
        const double lo = (v.u[i] - env_lo) / env_lo;
        const double hi = (env_hi - std::max(u.u[i], v.u[i])) / env_hi;
        lo_margin = std::min(lo_margin, lo);
        hi_margin = std::min(hi_margin, hi);
        if (lo < -opt.growth_tol)
            fail(ErrorCode::GrowthHypothesisViolation,
                 "lower growth envelope c1g r^{-2/(p-1)} exceeds v at node " +
                     std::to_string(i) + " (r=" + fmt(u.grid[i]) + ") by " +
                     fmt(-lo) + " relative");
        if (hi < -opt.growth_tol)
            fail(ErrorCode::GrowthHypothesisViolation,
                 "upper growth envelope c2g r^{-2/(p-1)} is below the pair at node " +
                     std::to_string(i) + " (r=" + fmt(u.grid[i]) + ") by " +
                     fmt(-hi) + " relative");
    }
    hc.lower_growth_margin = lo_margin;
    hc.upper_growth_margin = hi_margin;

    residual_signs(u, v, prm, opt, hc);

    const std::size_t last = u.size() - 1;
    hc.boundary_margin = (v.u[last] - u.u[last]) / v.u[last];
    if (u.u[last] > v.u[last] * (1.0 + opt.boundary_tol))
        fail(ErrorCode::HypothesisViolation,
             "ordering u(r0) <= v(r0) fails at r0=" + fmt(u.grid[last]) + ": u=" +
                 fmt(u.u[last]) + " v=" + fmt(v.u[last]));

    return form_verdict(u, v, u.u[last] / v.u[last], opt, hc);
}

std::pair<double, double> growth_constants(const RadialFunction& u,
                                           const RadialFunction& v,
                                           const ProblemParams& prm) {
    if (!prm.has_p() || !(prm.p > 1.0))
        fail(ErrorCode::SublinearExponent, "growth constants need p > 1");
    if (!(u.grid == v.grid))
        fail(ErrorCode::BadInput, "growth constants need a common grid");
    const double m = 2.0 / (prm.p - 1.0);
    double c1g = std::numeric_limits<double>::infinity();
    double c2g = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double w = std::pow(u.grid[i], m);
        c1g = std::min(c1g, v.u[i] * w);
        c2g = std::max({c2g, u.u[i] * w, v.u[i] * w});
    }
    return {c1g, c2g};
}

} // namespace pucci
