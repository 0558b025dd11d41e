#include "pucci/monotone_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "pucci/barriers.hpp"
#include "pucci/errors.hpp"
#include "pucci/radial_pucci.hpp"

namespace pucci {

namespace {

constexpr double kTiny = 1e-300;

std::string node_tag(const LogGrid& g, std::size_t i) {
    return "node " + std::to_string(i) + " (r=" + std::to_string(g[i]) + ")";
}

// 3-point second-order differences in s = log r:
//   v'' = (w_ss - w_s)/r^2,   v'/r = w_s/r^2.
struct Stencil {
    double D2 = 0, D1r = 0, scale = 0;   // scale bounds |each stencil term|
};

Stencil stencil_at(const LogGrid& g, const std::vector<double>& w, std::size_t i) {
    const double h = g.log_step(), r = g[i];
    const double wm = w[i - 1], wi = w[i], wp = w[i + 1];
    const double vss = (wp - 2.0 * wi + wm) / (h * h);
    const double vs = (wp - wm) / (2.0 * h);
    Stencil st;
    st.D2 = (vss - vs) / (r * r);
    st.D1r = vs / (r * r);
    st.scale = ((std::abs(wp) + 2.0 * std::abs(wi) + std::abs(wm)) / (h * h) +
                (std::abs(wp) + std::abs(wm)) / h) /
               (r * r);
    return st;
}

// residual G_i = -M+(v)_i + |v_i|^{p-1} v_i - f_i and its relative scale;
// optionally records the frozen branch weights for the Jacobian
void eval_residual(const AnnulusProblem& prob, const std::vector<double>& w,
                   std::vector<double>& G, std::vector<double>& S,
                   std::vector<double>* c2v, std::vector<double>* c1v) {
    const LogGrid& g = prob.grid;
    const double p = prob.prm.p;
    const std::size_t n = g.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Stencil st = stencil_at(g, w, i);
        double c2 = 0, c1 = 0;
        pucci_coefficients(st.D2, st.D1r, prob.prm, PucciSign::Plus, st.scale, c2, c1);
        const double absorb = std::pow(std::abs(w[i]), p - 1.0) * w[i];
        G[i] = -(c2 * st.D2 + c1 * st.D1r) + absorb - prob.f[i];
        S[i] = std::max(c2, c1) * st.scale + std::abs(absorb) + prob.f[i] + kTiny;
        if (c2v) (*c2v)[i] = c2;
        if (c1v) (*c1v)[i] = c1;
    }
}

double rel_norm(const std::vector<double>& G, const std::vector<double>& S) {
    double worst = 0;
    for (std::size_t i = 1; i + 1 < G.size(); ++i)
        worst = std::max(worst, std::abs(G[i]) / S[i]);
    return worst;
}

// in-place Thomas solve on the interior block; the diagonal of the
// assembled M-matrix stays positive through elimination
void thomas(std::vector<double>& lo, std::vector<double>& di, std::vector<double>& up,
            std::vector<double>& rhs) {
    const std::size_t k = di.size();
    for (std::size_t i = 1; i < k; ++i) {
        if (!(di[i - 1] > 0.0))
            fail(ErrorCode::NewtonDivergence, "tridiagonal pivot lost positivity");
        const double m = lo[i] / di[i - 1];
        di[i] -= m * up[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    if (!(di[k - 1] > 0.0))
        fail(ErrorCode::NewtonDivergence, "tridiagonal pivot lost positivity");
    rhs[k - 1] /= di[k - 1];
    for (std::size_t i = k - 1; i-- > 0;)
        rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}

// rows of d(-M+)/dw for interior node i with frozen weights; the
// off-diagonals must be <= 0 for the discrete comparison principle
struct JacobianRow {
    double lo, di, up;
};

JacobianRow jacobian_row(const LogGrid& g, double c2, double c1, std::size_t i) {
    const double h = g.log_step(), r2 = g[i] * g[i];
    JacobianRow row;
    row.lo = -(c2 / (h * h) + (c2 - c1) / (2.0 * h)) / r2;
    row.up = -(c2 / (h * h) + (c1 - c2) / (2.0 * h)) / r2;
    row.di = 2.0 * c2 / (h * h * r2);
    if (row.lo > 0.0 || row.up > 0.0)
        fail(ErrorCode::NonMonotoneOperator,
             "log step h=" + std::to_string(h) + " breaks the off-diagonal sign at " +
                 node_tag(g, i) + "; need h <= 2 c2/|c1 - c2| = " +
                 std::to_string(2.0 * c2 / std::abs(c1 - c2)));
    return row;
}

} // namespace

RadialFunction solve_annulus_bvp(const AnnulusProblem& prob, const BVPOptions& opt) {
    const LogGrid& g = prob.grid;
    const std::size_t n = g.size();
    if (!(g.r_min() > 0.0) || !(g.r_min() < 1.0) || std::abs(g.r_max() - 1.0) > 1e-12)
        fail(ErrorCode::BadInput, "annulus must span [a, 1] with 0 < a < 1");
    if (prob.f.size() != n)
        fail(ErrorCode::BadInput, "source/grid size mismatch");
    if (!(prob.prm.p > 1.0))
        fail(ErrorCode::SublinearExponent, "absorption needs p > 1");
    if (!(prob.va >= 0.0) || !(prob.vb >= 0.0))
        fail(ErrorCode::BadInput, "boundary values must be >= 0");
    for (std::size_t i = 0; i < n; ++i)
        if (!(prob.f[i] >= 0.0))
            fail(ErrorCode::BadInput, "source must be >= 0, got f=" +
                                          std::to_string(prob.f[i]) + " at " +
                                          node_tag(g, i));
    for (const std::vector<double>* v : {&prob.init, &prob.sub, &prob.super})
        if (!v->empty() && v->size() != n)
            fail(ErrorCode::BadInput, "per-node profile/grid size mismatch");
    if (!(opt.newton_tol > 0.0) || opt.max_newton < 1 || opt.max_damping < 1)
        fail(ErrorCode::BadInput, "BVP options must be positive");

    const double p = prob.prm.p;
    std::vector<double> w(n);
    if (!prob.init.empty()) {
        w = prob.init;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double t = double(i) / double(n - 1);
            w[i] = (1.0 - t) * prob.va + t * prob.vb;
        }
    }
    w.front() = prob.va;
    w.back() = prob.vb;

    std::vector<double> G(n, 0.0), S(n, 1.0), c2(n, 0.0), c1(n, 0.0);
    std::vector<double> lo(n - 2), di(n - 2), up(n - 2), rhs(n - 2);
    std::vector<double> wt(n), Gt(n, 0.0), St(n, 1.0);

    eval_residual(prob, w, G, S, &c2, &c1);
    double res = rel_norm(G, S);

    for (int it = 0; it < opt.max_newton && res > opt.newton_tol; ++it) {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const JacobianRow row = jacobian_row(g, c2[i], c1[i], i);
            lo[i - 1] = row.lo;
            up[i - 1] = row.up;
            di[i - 1] = row.di + p * std::pow(std::abs(w[i]), p - 1.0);
            rhs[i - 1] = -G[i];
        }
        thomas(lo, di, up, rhs);

        double t = 1.0;
        bool accepted = false;
        for (int k = 0; k <= opt.max_damping; ++k) {
            wt = w;
            for (std::size_t i = 1; i + 1 < n; ++i)
                wt[i] += t * rhs[i - 1];
            eval_residual(prob, wt, Gt, St, nullptr, nullptr);
            const double rt = rel_norm(Gt, St);
            if (rt <= (1.0 - 0.25 * t) * res || rt <= opt.newton_tol) {
                w.swap(wt);
                res = rt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // Picard sweep: frozen weights, lagged absorption coefficient
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const JacobianRow row = jacobian_row(g, c2[i], c1[i], i);
                lo[i - 1] = row.lo;
                up[i - 1] = row.up;
                di[i - 1] = row.di + std::pow(std::abs(w[i]), p - 1.0);
                rhs[i - 1] = prob.f[i];
            }
            rhs.front() -= lo.front() * prob.va;
            rhs.back() -= up.back() * prob.vb;
            thomas(lo, di, up, rhs);
            for (std::size_t i = 1; i + 1 < n; ++i) {
                double v = rhs[i - 1];
                if (!prob.sub.empty()) v = std::max(v, prob.sub[i]);
                if (!prob.super.empty()) v = std::min(v, prob.super[i]);
                w[i] = v;
            }
        }
        eval_residual(prob, w, G, S, &c2, &c1);
        res = rel_norm(G, S);
    }
    if (res > opt.newton_tol)
        fail(ErrorCode::NewtonDivergence,
             "annulus BVP stalled at relative residual " + std::to_string(res) +
                 " after " + std::to_string(opt.max_newton) + " iterations");

    return RadialFunction::from_samples(g, std::move(w));
}

std::string_view to_string(SchemeCase c) {
    switch (c) {
        case SchemeCase::TauPlus:     return "tau-plus";
        case SchemeCase::TauMinus:    return "tau-minus";
        case SchemeCase::LogCritical: return "log-critical";
    }
    return "?";
}

SchemeCase scheme_case_from_string(std::string_view name) {
    for (SchemeCase c : {SchemeCase::TauPlus, SchemeCase::TauMinus, SchemeCase::LogCritical})
        if (name == to_string(c)) return c;
    fail(ErrorCode::BadInput, "unknown scheme case '" + std::string(name) + "'");
}

namespace {

struct CaseBarriers {
    Barrier sub, super;
};

// sub-barrier fixes the boundary data and the frozen profile on fresh
// octaves; the super-barrier is chosen with at least 2x headroom over the
// sub so discretization wobble cannot graze the bracket
CaseBarriers case_barriers(SchemeCase c, const ConstantSet& cs) {
    switch (c) {
    case SchemeCase::TauPlus: {
        Barrier sub = make_barrier(BarrierKind::TauPlusSub, cs);
        BarrierParams sp;
        sp.gamma = cs.tau_plus;
        sp.c = 2.0 * *sub.params().eps;   // sub <= eps r^{-tau_plus}
        Barrier super = make_barrier(BarrierKind::PowerSuper, cs, sp);
        return {std::move(sub), std::move(super)};
    }
    case SchemeCase::TauMinus: {
        Barrier sub = make_barrier(BarrierKind::TauMinusSub, cs);
        BarrierParams sp;
        sp.gamma = cs.tau_minus;
        sp.c = 4.0 * *sub.params().eps;   // sub <= 2 eps r^{-tau_minus}
        Barrier super = make_barrier(BarrierKind::PowerSuper, cs, sp);
        return {std::move(sub), std::move(super)};
    }
    case SchemeCase::LogCritical: {
        Barrier sub = make_barrier(BarrierKind::LogSub, cs);
        Barrier super = make_barrier(BarrierKind::LogSuper, cs);
        return {std::move(sub), std::move(super)};
    }
    }
    fail(ErrorCode::BadInput, "unknown scheme case");
}

// full-equation residual of the limit under the scheme's own 3-point
// operator, relative to the realized term magnitudes (not the stencil
// bound, which the h^-2 cancellation would inflate)
double scheme_residual_norm(const RadialFunction& v, const ProblemParams& prm) {
    double worst = 0;
    const std::size_t n = v.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Stencil st = stencil_at(v.grid, v.u, i);
        const double r = v.grid[i];
        const double pucci = pucci_radial(st.D2, st.D1r, prm);
        const double hardy = prm.mu * v.u[i] / (r * r);
        const double absorb = std::pow(v.u[i], prm.p);
        const double R = pucci + hardy - absorb;
        const double S = std::abs(pucci) + std::abs(hardy) + absorb + kTiny;
        worst = std::max(worst, std::abs(R) / S);
    }
    return worst;
}

} // namespace

SchemeResult run_scheme(SchemeCase c, const ConstantSet& cs, const SchemeOptions& opt) {
    if (opt.n_start < 1 || opt.n_max < opt.n_start)
        fail(ErrorCode::BadInput, "need 1 <= n_start <= n_max");
    if (opt.nodes_per_octave < 8)
        fail(ErrorCode::BadInput, "need at least 8 nodes per octave");
    if (!(opt.mono_tol > 0.0) || !(opt.bracket_tol > 0.0) || !(opt.scheme_tol > 0.0))
        fail(ErrorCode::BadInput, "scheme tolerances must be positive");

    const CaseBarriers bars = case_barriers(c, cs);
    const std::size_t q = std::size_t(opt.nodes_per_octave);
    const double mu = cs.prm.mu;

    std::vector<RadialFunction> iterates;
    std::vector<double> prev;
    SchemeCertificate cert;

    for (int n = opt.n_start; n <= opt.n_max; ++n) {
        const LogGrid g = LogGrid::dyadic(n, opt.nodes_per_octave);
        const std::size_t M = g.size();
        const RadialFunction subs = bars.sub.sample(g);
        const RadialFunction sups = bars.super.sample(g);

        // freeze the singular coefficient: sub-barrier on the fresh inner
        // octave, previous iterate on the carried-over nodes
        std::vector<double> frozen(M);
        const std::size_t fresh = (n == opt.n_start) ? M : q;
        for (std::size_t i = 0; i < fresh; ++i) frozen[i] = subs.u[i];
        for (std::size_t i = fresh; i < M; ++i) frozen[i] = prev[i - q];

        std::vector<double> f(M);
        for (std::size_t i = 0; i < M; ++i) f[i] = mu * frozen[i] / (g[i] * g[i]);

        AnnulusProblem prob{g, std::move(f), subs.u.front(), subs.u.back(), cs.prm,
                            frozen, subs.u, sups.u};
        RadialFunction v = solve_annulus_bvp(prob, opt.bvp);

        for (std::size_t i = 0; i < M; ++i) {
            const double sc = std::max({sups.u[i], std::abs(v.u[i]), kTiny});
            const double margin =
                std::min(v.u[i] - subs.u[i], sups.u[i] - v.u[i]) / sc;
            cert.bracket_worst = std::min(cert.bracket_worst, margin);
            if (margin < -opt.bracket_tol)
                fail(ErrorCode::BracketViolation,
                     "iteration n=" + std::to_string(n) + ", " + node_tag(g, i) +
                         ": v=" + std::to_string(v.u[i]) + " escapes [" +
                         std::to_string(subs.u[i]) + ", " + std::to_string(sups.u[i]) +
                         "]");
        }

        if (n > opt.n_start) {
            double delta = 0;
            for (std::size_t i = q; i < M; ++i) {
                const double a = prev[i - q], b = v.u[i];
                const double sc = std::max({a, b, kTiny});
                const double margin = (b - a) / sc;
                cert.mono_worst = std::min(cert.mono_worst, margin);
                if (margin < -opt.mono_tol)
                    fail(ErrorCode::MonotonicityViolation,
                         "iteration n=" + std::to_string(n) + ", " + node_tag(g, i) +
                             ": iterate dropped from " + std::to_string(a) + " to " +
                             std::to_string(b));
                delta = std::max(delta, std::abs(b - a) / sc);
            }
            cert.delta_final = delta;
            cert.converged = delta <= opt.scheme_tol;
        }

        prev = v.u;
        cert.n_final = n;
        if (opt.keep_iterates)
            iterates.push_back(std::move(v));
        else if (n == opt.n_max || cert.converged)
            iterates.assign(1, std::move(v));
        if (cert.converged) break;
    }

    RadialFunction limit = iterates.back();
    if (!opt.keep_iterates) iterates.clear();

    cert.monotone = true;
    cert.bracketed = true;
    cert.residual_norm = scheme_residual_norm(limit, cs.prm);
    return SchemeResult{std::move(iterates), std::move(limit), cert};
}

RadialFunction stable_tail(const SchemeResult& res, double agree_tol) {
    if (!(agree_tol > 0.0))
        fail(ErrorCode::BadInput, "agree_tol must be positive");
    if (res.iterates.size() < 2)
        fail(ErrorCode::InsufficientTail,
             "stable tail needs at least two retained iterates (keep_iterates)");
    const RadialFunction& last = res.iterates.back();
    const RadialFunction& prev = res.iterates[res.iterates.size() - 2];
    const std::size_t shift = last.size() - prev.size();

    // deepest suffix on which both iterates agree; nodes below the shift
    // have no counterpart in the previous iterate and are never stable
    std::size_t i0 = shift;
    for (std::size_t i = last.size(); i-- > shift;) {
        const double a = prev.u[i - shift];
        const double b = last.u[i];
        if (std::abs(b - a) > agree_tol * std::max(std::abs(b), kTiny)) {
            i0 = i + 1;
            break;
        }
    }
    if (last.size() < i0 + 6)
        fail(ErrorCode::InsufficientTail,
             "iterates still differ by more than agree_tol over the whole overlap");
    const auto& nodes = last.grid.nodes();
    std::vector<double> r(nodes.begin() + long(i0), nodes.end() - 1);
    std::vector<double> u(last.u.begin() + long(i0), last.u.end() - 1);
    return RadialFunction::from_samples(LogGrid::from_nodes(std::move(r)), std::move(u));
}

} // namespace pucci
