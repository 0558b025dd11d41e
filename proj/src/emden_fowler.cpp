#include "pucci/emden_fowler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pucci/errors.hpp"

namespace pucci {

std::string_view to_string(EFDirection d) {
    return d == EFDirection::Forward ? "forward" : "backward";
}

std::string_view to_string(EFTermination t) {
    switch (t) {
        case EFTermination::SpanReached: return "span-reached";
        case EFTermination::BlowUp:      return "blow-up";
        case EFTermination::Underflow:   return "underflow";
        case EFTermination::StepFailure: return "step-failure";
    }
    return "?";
}

namespace {

void need_exponent(const ConstantSet& cs) {
    if (!cs.prm.has_p() || !(cs.prm.p > 1.0))
        fail(ErrorCode::SublinearExponent, "Emden-Fowler dynamics need p > 1");
}

// roots of s^2 - b s + c = 0, cancellation-free branch first
void solve_quadratic(double b, double c, double& lo, double& hi) {
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0)
        fail(ErrorCode::BadInput, "complex roots in linearization quadratic");
    const double sd = std::sqrt(disc);
    const double r1 = (b >= 0.0) ? 0.5 * (b + sd) : 0.5 * (b - sd);
    const double r2 = (r1 != 0.0) ? c / r1 : b - r1;
    lo = std::min(r1, r2);
    hi = std::max(r1, r2);
}

} // namespace

double ef_rhs(double x, double xp, const ConstantSet& cs) {
    need_exponent(cs);
    if (x < 0.0)
        fail(ErrorCode::NegativeX, "ef_rhs needs x >= 0");
    return (cs.lambda1 + cs.lambda2) * xp - cs.lambda1 * cs.lambda2 * x +
           std::pow(x, cs.prm.p) / cs.prm.Lambda;
}

double ef_rhs(const EFState& s, const ConstantSet& cs) { return ef_rhs(s.x, s.xp, cs); }

std::vector<Equilibrium> ef_equilibria(const ConstantSet& cs) {
    need_exponent(cs);
    std::vector<Equilibrium> out;
    Equilibrium origin;
    origin.x = 0.0;
    solve_quadratic(cs.lambda1 + cs.lambda2, cs.lambda1 * cs.lambda2,
                    origin.nu1, origin.nu2);
    out.push_back(origin);
    if (cs.K) {
        Equilibrium k;
        k.x = *cs.K;
        solve_quadratic(cs.lambda1 + cs.lambda2,
                        (1.0 - cs.prm.p) * cs.lambda1 * cs.lambda2, k.nu1, k.nu2);
        out.push_back(k);
    }
    return out;
}

// ---- integration ----------------------------------------------------------

namespace {

struct Y2 {
    double x, xp;
};

struct K2 {
    double dx, dxp;
    bool ok;
};

K2 rhs_raw(const ConstantSet& cs, const Y2& y) {
    if (y.x < 0.0) return {0.0, 0.0, false};
    return {y.xp,
            (cs.lambda1 + cs.lambda2) * y.xp - cs.lambda1 * cs.lambda2 * y.x +
                std::pow(y.x, cs.prm.p) / cs.prm.Lambda,
            true};
}

// Dormand-Prince 5(4) coefficients (FSAL)
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

struct StepResult {
    Y2 y_new;
    K2 k_new;        // FSAL stage, valid when ok
    double err = 0;  // weighted error norm
    bool ok = false; // all stages admissible
};

StepResult dp5_step(const ConstantSet& cs, const Y2& y, const K2& k1, double h,
                    double rel, double abs) {
    StepResult out;
    auto lin = [&](std::initializer_list<std::pair<double, const K2*>> terms) {
        Y2 z = y;
        for (auto [c, k] : terms) {
            z.x += h * c * k->dx;
            z.xp += h * c * k->dxp;
        }
        return z;
    };
    const K2 k2 = rhs_raw(cs, lin({{A21, &k1}}));
    if (!k2.ok) return out;
    const K2 k3 = rhs_raw(cs, lin({{A31, &k1}, {A32, &k2}}));
    if (!k3.ok) return out;
    const K2 k4 = rhs_raw(cs, lin({{A41, &k1}, {A42, &k2}, {A43, &k3}}));
    if (!k4.ok) return out;
    const K2 k5 = rhs_raw(cs, lin({{A51, &k1}, {A52, &k2}, {A53, &k3}, {A54, &k4}}));
    if (!k5.ok) return out;
    const K2 k6 =
        rhs_raw(cs, lin({{A61, &k1}, {A62, &k2}, {A63, &k3}, {A64, &k4}, {A65, &k5}}));
    if (!k6.ok) return out;
    out.y_new = lin({{B1, &k1}, {B3, &k3}, {B4, &k4}, {B5, &k5}, {B6, &k6}});
    out.k_new = rhs_raw(cs, out.y_new);
    if (!out.k_new.ok) return out;

    const double ex = h * (E1 * k1.dx + E3 * k3.dx + E4 * k4.dx + E5 * k5.dx +
                           E6 * k6.dx + E7 * out.k_new.dx);
    const double exp_ = h * (E1 * k1.dxp + E3 * k3.dxp + E4 * k4.dxp + E5 * k5.dxp +
                             E6 * k6.dxp + E7 * out.k_new.dxp);
    const double wx = abs + rel * std::max(std::abs(y.x), std::abs(out.y_new.x));
    const double wp = abs + rel * std::max(std::abs(y.xp), std::abs(out.y_new.xp));
    const double rx = ex / wx, rp = exp_ / wp;
    out.err = std::sqrt(0.5 * (rx * rx + rp * rp));
    out.ok = true;
    return out;
}

} // namespace

EFTrajectory integrate_ef(const ConstantSet& cs, EFState start, double span,
                          EFDirection dir, const EFOptions& opt) {
    need_exponent(cs);
    if (!(span > 0.0) || !std::isfinite(span))
        fail(ErrorCode::BadInput, "integration span must be positive");
    if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0))
        fail(ErrorCode::BadInput, "tolerances must be positive");
    if (start.x < 0.0)
        fail(ErrorCode::NegativeX, "initial x must be nonnegative");

    const double sgn = (dir == EFDirection::Forward) ? 1.0 : -1.0;
    const double t_end = start.t + sgn * span;

    EFTrajectory traj;
    traj.direction = dir;
    traj.states.push_back(start);

    Y2 y{start.x, start.xp};
    K2 k1 = rhs_raw(cs, y);
    double t = start.t;
    double h = sgn * std::min({opt.h_init, opt.h_max, span});
    std::size_t fixed_n = 0;
    if (opt.fixed_step > 0.0) {
        fixed_n = static_cast<std::size_t>(std::ceil(span / opt.fixed_step));
        h = sgn * span / static_cast<double>(fixed_n);
    }

    while (true) {
        if (traj.accepted + traj.rejected >= opt.max_steps) {
            traj.termination = EFTermination::StepFailure;
            break;
        }
        if (opt.fixed_step > 0.0 && traj.accepted >= fixed_n) {
            traj.termination = EFTermination::SpanReached;
            break;
        }
        const double remaining = t_end - t;
        if (opt.fixed_step <= 0.0 &&
            sgn * remaining <= 1e-14 * std::max(1.0, std::abs(t))) {
            traj.termination = EFTermination::SpanReached;
            break;
        }
        bool last = false;
        if (opt.fixed_step <= 0.0 && std::abs(h) >= std::abs(remaining)) {
            h = remaining;
            last = true;
        } else if (opt.fixed_step > 0.0 && traj.accepted + 1 == fixed_n) {
            last = true;
        }

        const StepResult st = dp5_step(cs, y, k1, h, opt.rel_tol, opt.abs_tol);
        const bool accept =
            opt.fixed_step > 0.0 || (st.ok && st.err <= 1.0);
        if (accept && st.ok) {
            t = last ? t_end : t + h;
            y = st.y_new;
            k1 = st.k_new;
            ++traj.accepted;
            traj.states.push_back({t, y.x, y.xp});
            if (y.x > opt.x_max) {
                traj.termination = EFTermination::BlowUp;
                break;
            }
            if (y.x < opt.x_min) {
                traj.termination = EFTermination::Underflow;
                break;
            }
            if (opt.fixed_step <= 0.0) {
                const double fac = (st.err > 0.0)
                    ? std::clamp(0.9 * std::pow(st.err, -0.2), 0.2, 5.0) : 5.0;
                h = sgn * std::min(std::abs(h) * fac, opt.h_max);
            }
        } else {
            if (opt.fixed_step > 0.0) {   // inadmissible stage at fixed step
                traj.termination = EFTermination::StepFailure;
                break;
            }
            ++traj.rejected;
            const double fac = (st.ok && st.err > 0.0)
                ? std::clamp(0.9 * std::pow(st.err, -0.2), 0.2, 1.0) : 0.5;
            h *= fac;
            if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t))) {
                traj.termination = EFTermination::StepFailure;
                break;
            }
        }
    }
    return traj;
}

// ---- transform ------------------------------------------------------------

EFSamples to_ef(const RadialFunction& u, double p) {
    if (!(p > 1.0))
        fail(ErrorCode::SublinearExponent, "transform needs p > 1");
    const double m = 2.0 / (p - 1.0);
    EFSamples s{u.grid, p, {}, {}, {}, {}};
    const std::size_t n = u.size();
    s.t.resize(n);
    s.x.resize(n);
    s.xp.resize(n);
    s.xpp.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = u.grid[i];
        s.t[i] = std::log(r);
        const double x = std::pow(r, m) * u.u[i];
        const double xp = m * x + std::pow(r, m + 1.0) * u.du[i];
        s.x[i] = x;
        s.xp[i] = xp;
        s.xpp[i] = (2.0 * m + 1.0) * xp - m * (m + 1.0) * x +
                   std::pow(r, m + 2.0) * u.ddu[i];
    }
    return s;
}

RadialFunction from_ef(const EFSamples& s) {
    if (!(s.p > 1.0))
        fail(ErrorCode::SublinearExponent, "transform needs p > 1");
    const double m = 2.0 / (s.p - 1.0);
    RadialFunction out{s.grid, {}, {}, {}, DerivativeProvenance::Transform};
    const std::size_t n = s.grid.size();
    if (s.x.size() != n || s.xp.size() != n || s.xpp.size() != n)
        fail(ErrorCode::BadInput, "sample arrays do not match the grid");
    out.u.resize(n);
    out.du.resize(n);
    out.ddu.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = s.grid[i];
        out.u[i] = s.x[i] / std::pow(r, m);
        out.du[i] = (s.xp[i] - m * s.x[i]) / std::pow(r, m + 1.0);
        out.ddu[i] = (s.xpp[i] - (2.0 * m + 1.0) * s.xp[i] + m * (m + 1.0) * s.x[i]) /
                     std::pow(r, m + 2.0);
    }
    return out;
}

RadialFunction trajectory_to_radial(const EFTrajectory& traj, const ConstantSet& cs,
                                    const LogGrid& g) {
    need_exponent(cs);
    if (traj.states.size() < 2)
        fail(ErrorCode::BadInput, "trajectory has fewer than two states");
    // states ascending in t for the search, regardless of direction
    std::vector<EFState> st = traj.states;
    if (traj.direction == EFDirection::Backward) std::reverse(st.begin(), st.end());
    const double t_lo = st.front().t, t_hi = st.back().t;
    const double slack = 1e-12 * std::max(1.0, t_hi - t_lo);
    const double m = 2.0 / (cs.prm.p - 1.0);

    RadialFunction out{g, {}, {}, {}, DerivativeProvenance::Transform};
    out.u.resize(g.size());
    out.du.resize(g.size());
    out.ddu.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g[i];
        const double t = std::log(r);
        if (t < t_lo - slack || t > t_hi + slack)
            fail(ErrorCode::OutOfValidity,
                 "grid node r=" + std::to_string(r) + " outside the trajectory span");
        auto it = std::upper_bound(st.begin(), st.end(), t,
                                   [](double v, const EFState& s) { return v < s.t; });
        std::size_t j1 = std::min<std::size_t>(st.size() - 1,
                                               std::max<std::ptrdiff_t>(1, it - st.begin()));
        const EFState& a = st[j1 - 1];
        const EFState& b = st[j1];
        const double h = b.t - a.t;
        const double th = std::clamp((t - a.t) / h, 0.0, 1.0);
        const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
        const double h10 = th * (1.0 - th) * (1.0 - th);
        const double h01 = th * th * (3.0 - 2.0 * th);
        const double h11 = th * th * (th - 1.0);
        const double x = h00 * a.x + h * h10 * a.xp + h01 * b.x + h * h11 * b.xp;
        const double d00 = -6.0 * th * (1.0 - th);
        const double d10 = (1.0 - th) * (1.0 - 3.0 * th);
        const double d01 = 6.0 * th * (1.0 - th);
        const double d11 = th * (3.0 * th - 2.0);
        const double xp = (d00 / h) * a.x + d10 * a.xp + (d01 / h) * b.x + d11 * b.xp;
        if (x < 0.0)
            fail(ErrorCode::NonPositiveSample,
                 "interpolated trajectory negative at r=" + std::to_string(r));
        const double xpp = ef_rhs(x, xp, cs);   // second derivative from the dynamics
        out.u[i] = x / std::pow(r, m);
        out.du[i] = (xp - m * x) / std::pow(r, m + 1.0);
        out.ddu[i] = (xpp - (2.0 * m + 1.0) * xp + m * (m + 1.0) * x) /
                     std::pow(r, m + 2.0);
    }
    return out;
}

// ---- tail fitting ----------------------------------------------------------

RateFit asymptotic_rate(const EFTrajectory& traj, double tail_fraction) {
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
        fail(ErrorCode::BadInput, "tail_fraction must lie in (0, 1]");
    if (traj.states.empty())
        fail(ErrorCode::InsufficientTail, "empty trajectory");
    const double t0 = traj.front().t;
    const double full = std::abs(traj.back().t - t0);
    const double cut = (1.0 - tail_fraction) * full;

    std::vector<double> ts, ls;
    for (const EFState& s : traj.states)
        if (std::abs(s.t - t0) >= cut && s.x > 0.0) {
            ts.push_back(s.t);
            ls.push_back(std::log(s.x));
        }
    if (ts.size() < 20)
        fail(ErrorCode::InsufficientTail,
             "tail window has " + std::to_string(ts.size()) + " positive samples (< 20)");

    auto ols = [](const std::vector<double>& xs, const std::vector<double>& ys,
                  double& slope, double& se, double& icept) {
        const std::size_t n = xs.size();
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < n; ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= double(n);
        my /= double(n);
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        slope = sxy / sxx;
        icept = my - slope * mx;
        double sse = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = ys[i] - (icept + slope * xs[i]);
            sse += e * e;
        }
        se = (n > 2) ? std::sqrt(sse / (double(n) - 2.0) / sxx) : 0.0;
    };

    RateFit fit;
    fit.points = ts.size();
    ols(ts, ls, fit.slope, fit.stderr_, fit.intercept);

    if (std::abs(fit.slope) < 1e-3) {
        // algebraic decay probe: log x against log(-t)
        std::vector<double> lt, lx;
        for (std::size_t i = 0; i < ts.size(); ++i)
            if (ts[i] < 0.0) {
                lt.push_back(std::log(-ts[i]));
                lx.push_back(ls[i]);
            }
        if (lt.size() >= 20) {
            double icept = 0;
            ols(lt, lx, fit.log_slope, fit.log_stderr, icept);
            fit.log_power = true;
        }
    }
    return fit;
}

} // namespace pucci
