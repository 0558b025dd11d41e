#include "pucci/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "pucci/errors.hpp"

namespace pucci {

namespace {

constexpr double kTiny = 1e-300;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

void require_positive(const RadialFunction& u) {
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!(u.u[i] > 0.0))
            fail(ErrorCode::NonPositiveSample,
                 "u <= 0 at node " + std::to_string(i) + " (r=" + fmt(u.grid[i]) +
                     "); trim boundary zeros before classifying");
}

// Indices of the deepest tail_decades decades, excluding r >= 1 where the
// asymptotic compensations degenerate.  Grid nodes ascend in r, so the
// window is an initial segment.
std::vector<std::size_t> tail_window(const LogGrid& g, double tail_decades) {
    const double r_hi = g.r_min() * std::pow(10.0, tail_decades) * (1.0 + 1e-12);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] > r_hi || g[i] >= 1.0) break;
        idx.push_back(i);
    }
    return idx;
}

// Least-squares slope of log u against log r over the window.
double loglog_slope(const RadialFunction& u, const std::vector<std::size_t>& win) {
    double ms = 0, my = 0;
    for (std::size_t i : win) {
        ms += std::log(u.grid[i]);
        my += std::log(u.u[i]);
    }
    ms /= static_cast<double>(win.size());
    my /= static_cast<double>(win.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i : win) {
        const double dx = std::log(u.grid[i]) - ms;
        sxx += dx * dx;
        sxy += dx * (std::log(u.u[i]) - my);
    }
    return sxy / sxx;
}

struct ConstantFit {
    double constant = 0;   // geometric mean of the compensated samples
    double rel_rms = 0;    // relative rms spread about the constant
    double deep_dev = 0;   // signed relative deviation at the deepest node
};

ConstantFit fit_constant(const std::vector<double>& q) {
    ConstantFit f;
    double mlog = 0;
    for (double v : q) mlog += std::log(v);
    f.constant = std::exp(mlog / static_cast<double>(q.size()));
    double s2 = 0;
    for (double v : q) {
        const double d = v / f.constant - 1.0;
        s2 += d * d;
    }
    f.rel_rms = std::sqrt(s2 / static_cast<double>(q.size()));
    f.deep_dev = q.front() / f.constant - 1.0;
    return f;
}

// u r^{expo} (log_half: additionally (-log r)^{expo_half}) on the window.
std::vector<double> compensated(const RadialFunction& u,
                                const std::vector<std::size_t>& win,
                                double expo, double expo_half = 0.0) {
    std::vector<double> q;
    q.reserve(win.size());
    for (std::size_t i : win) {
        double v = u.u[i] * std::pow(u.grid[i], expo);
        if (expo_half != 0.0) v *= std::pow(-std::log(u.grid[i]), expo_half);
        q.push_back(v);
    }
    return q;
}

bool variant_allowed(AsymptoticVariant v, RegimeKind k) {
    switch (k) {
        case RegimeKind::Subcritical:
            return v == AsymptoticVariant::PowerK || v == AsymptoticVariant::TauPlus ||
                   v == AsymptoticVariant::TauMinus;
        case RegimeKind::Intermediate: return v == AsymptoticVariant::TauMinus;
        case RegimeKind::LogCritical: return v == AsymptoticVariant::LogCritical;
        case RegimeKind::Supercritical: return v == AsymptoticVariant::PowerK;
    }
    return false;
}

} // namespace

std::string_view to_string(AsymptoticVariant v) {
    switch (v) {
        case AsymptoticVariant::PowerK: return "PowerK";
        case AsymptoticVariant::TauPlus: return "TauPlus";
        case AsymptoticVariant::TauMinus: return "TauMinus";
        case AsymptoticVariant::LogCritical: return "LogCritical";
    }
    return "?";
}

AsymptoticVariant variant_from_string(std::string_view name) {
    if (name == "PowerK") return AsymptoticVariant::PowerK;
    if (name == "TauPlus") return AsymptoticVariant::TauPlus;
    if (name == "TauMinus") return AsymptoticVariant::TauMinus;
    if (name == "LogCritical") return AsymptoticVariant::LogCritical;
    fail(ErrorCode::BadInput, "unknown asymptotic variant '" + std::string(name) + "'");
}

AsymptoticClass classify(const RadialFunction& u, const ConstantSet& cs,
                         double tail_decades, const ClassifyOptions& opt) {
    if (!(tail_decades > 0.0) || !(opt.max_r_min > 0.0) || !(opt.eq_tol > 0.0) ||
        opt.min_window_nodes < 4)
        fail(ErrorCode::BadInput, "classify options must be positive (>= 4 window nodes)");
    if (!cs.in_regime)
        fail(ErrorCode::RegimeMismatch,
             "classification needs 0 < mu < lambda_bar and p > 1");
    if (u.size() < opt.min_window_nodes)
        fail(ErrorCode::GridTooSmall, "need at least " +
                                          std::to_string(opt.min_window_nodes) + " samples");
    require_positive(u);
    if (u.grid.r_min() > opt.max_r_min * (1.0 + 1e-12))
        fail(ErrorCode::TailTooShort, "grid reaches only r=" + fmt(u.grid.r_min()) +
                                          "; the tail must reach r <= " + fmt(opt.max_r_min));

    const std::vector<std::size_t> win = tail_window(u.grid, tail_decades);
    if (win.size() < opt.min_window_nodes)
        fail(ErrorCode::TailTooShort,
             "tail window holds " + std::to_string(win.size()) + " nodes; need >= " +
                 std::to_string(opt.min_window_nodes));

    const double p = cs.prm.p;
    const double m = 2.0 / (p - 1.0);
    const Regime regime = classify_regime(p, cs, opt.eq_tol);
    const bool critical = regime.kind == RegimeKind::LogCritical;

    struct Cand {
        double expo;
        AsymptoticVariant variant;
    };
    std::vector<Cand> cands;
    if (!critical && cs.K.has_value()) cands.push_back({m, AsymptoticVariant::PowerK});
    cands.push_back({cs.tau_plus, AsymptoticVariant::TauPlus});
    cands.push_back({cs.tau_minus, AsymptoticVariant::TauMinus});

    // Quarter of the minimal candidate gap; at p == p** the exact-power
    // exponent coincides with tau_minus and is not a candidate, so only
    // the tau_plus/tau_minus gap counts there.
    double gap = std::abs(cs.tau_plus - cs.tau_minus);
    if (!critical) {
        gap = std::min(gap, std::abs(m - cs.tau_plus));
        gap = std::min(gap, std::abs(m - cs.tau_minus));
    }
    const double slope_tol = std::clamp(0.25 * gap, 1e-4, 0.1);

    const double slope = loglog_slope(u, win);
    const Cand* best = nullptr;
    double best_d = 0;
    int within_tol = 0, within_half = 0;
    for (const Cand& c : cands) {
        const double d = std::abs(slope + c.expo);
        if (d <= slope_tol) ++within_tol;
        if (d <= 0.5 * slope_tol) ++within_half;
        if (best == nullptr || d < best_d) {
            best = &c;
            best_d = d;
        }
    }
    if (within_tol == 0)
        fail(ErrorCode::AmbiguousClass,
             "tail slope " + fmt(slope) + " matches no candidate exponent within " +
                 fmt(slope_tol));
    if (within_half >= 2)
        fail(ErrorCode::AmbiguousClass, "tail slope " + fmt(slope) +
                                            " sits within " + fmt(0.5 * slope_tol) +
                                            " of two candidate exponents");

    AsymptoticClass out;
    out.variant = best->variant;
    ConstantFit fit;
    if (critical && best->variant == AsymptoticVariant::TauMinus) {
        // regime decides first: a tau_minus slope at p == p** is either the
        // log-corrected profile or a genuine power tail; keep the flatter
        // compensation
        const ConstantFit log_fit =
            fit_constant(compensated(u, win, cs.tau_minus, 0.5 * cs.tau_minus));
        const ConstantFit plain_fit = fit_constant(compensated(u, win, cs.tau_minus));
        if (log_fit.rel_rms <= plain_fit.rel_rms) {
            out.variant = AsymptoticVariant::LogCritical;
            fit = log_fit;
        } else {
            fit = plain_fit;
        }
    } else {
        fit = fit_constant(compensated(u, win, best->expo));
    }
    out.constant = fit.constant;

    out.diagnostics.slope = slope;
    out.diagnostics.slope_tol = slope_tol;
    out.diagnostics.fit_residual = fit.rel_rms;
    out.diagnostics.secondary_correction = fit.deep_dev;
    out.diagnostics.window_lo = u.grid[win.front()];
    out.diagnostics.window_hi = u.grid[win.back()];
    out.diagnostics.window_nodes = win.size();
    out.diagnostics.regime_consistent = variant_allowed(out.variant, regime.kind);
    if (opt.check_regime && !out.diagnostics.regime_consistent)
        fail(ErrorCode::RegimeMismatch,
             std::string("variant ") + std::string(to_string(out.variant)) +
                 " is not admissible in regime " + std::string(to_string(regime.kind)));
    return out;
}

BoundsReport check_asymptotic_bounds(const RadialFunction& u, const ConstantSet& cs,
                                     const BoundsOptions& opt) {
    if (!(opt.mono_tol > 0.0) || !(opt.growth_tol > 0.0) || !(opt.bound_slack > 0.0) ||
        !(opt.tail_decades > 0.0) || !(opt.eq_tol > 0.0))
        fail(ErrorCode::BadInput, "bounds options must be positive");
    if (!cs.in_regime)
        fail(ErrorCode::RegimeMismatch,
             "asymptotic bounds need 0 < mu < lambda_bar and p > 1");
    if (u.size() < 8)
        fail(ErrorCode::GridTooSmall, "need at least 8 samples");
    require_positive(u);

    const double p = cs.prm.p;
    const double m = 2.0 / (p - 1.0);
    const std::size_t n = u.size();
    BoundsReport rep;
    std::string violations;
    auto record = [&violations](const std::string& what) {
        if (!violations.empty()) violations += "; ";
        violations += what;
    };

    // (i) u r^{2/(p-1)} bounded toward r = 0: the compensated tail must not
    // keep growing as r decreases (negative log-log slope)
    std::vector<std::size_t> win = tail_window(u.grid, opt.tail_decades);
    if (win.size() < 4)
        fail(ErrorCode::TailTooShort, "tail window holds " + std::to_string(win.size()) +
                                          " nodes; need >= 4");
    double worst_q = 0;
    std::size_t worst_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double q = u.u[i] * std::pow(u.grid[i], m);
        if (q > worst_q) {
            worst_q = q;
            worst_i = i;
        }
    }
    rep.power_constant = worst_q;
    RadialFunction comp = u;
    for (std::size_t i = 0; i < n; ++i) comp.u[i] = u.u[i] * std::pow(u.grid[i], m);
    rep.power_slope = loglog_slope(comp, win);
    if (rep.power_slope < -opt.growth_tol)
        record("bound (i): u r^{2/(p-1)} grows toward the origin (tail slope " +
               fmt(rep.power_slope) + ", peak " + fmt(worst_q) + " at node " +
               std::to_string(worst_i) + ")");

    // (ii) reported only: the deepest decade exceeding the shallowest decade
    // is finite-sample evidence of a singularity, not a limit statement
    const double r_lo_decade = u.grid.r_min() * 10.0;
    const double r_hi_decade = u.grid.r_max() / 10.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (u.grid[i] <= r_lo_decade) rep.tail_peak = std::max(rep.tail_peak, u.u[i]);
        if (u.grid[i] >= r_hi_decade) rep.head_peak = std::max(rep.head_peak, u.u[i]);
    }
    rep.unbounded_observed = rep.tail_peak > rep.head_peak;

    // (iii) p* <= p <= p**: v = r^{tau_minus} u non-decreasing in r
    auto [ps, pss] = critical_exponents(cs);
    rep.v_check_applies = p >= ps * (1.0 - opt.eq_tol) && p <= pss * (1.0 + opt.eq_tol);
    if (rep.v_check_applies) {
        double worst = 0;
        std::size_t at = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double a = u.u[i] * std::pow(u.grid[i], cs.tau_minus);
            const double b = u.u[i + 1] * std::pow(u.grid[i + 1], cs.tau_minus);
            const double margin = (b - a) / std::max({std::abs(a), std::abs(b), kTiny});
            if (margin < worst) {
                worst = margin;
                at = i + 1;
            }
        }
        rep.v_worst_drop = worst;
        if (worst < -opt.mono_tol)
            record("bound (iii): r^{tau_minus} u decreases by " + fmt(-worst) +
                   " (relative) at node " + std::to_string(at) + " (r=" +
                   fmt(u.grid[at]) + ")");
    }

    // (iv) p == p**: log-half envelope with the constant fitted on the tail
    rep.log_half_applies =
        classify_regime(p, cs, opt.eq_tol).kind == RegimeKind::LogCritical;
    if (rep.log_half_applies) {
        auto halfq = [&](std::size_t i) {
            const double lr = -std::log(u.grid[i]);
            return lr > 0.0
                       ? u.u[i] * std::pow(u.grid[i], cs.tau_minus) *
                             std::pow(lr, 0.5 * cs.tau_minus)
                       : 0.0;
        };
        double c_fit = 0;
        for (std::size_t i : win) c_fit = std::max(c_fit, halfq(i));
        rep.log_half_constant = c_fit;
        for (std::size_t i = 0; i < n; ++i) {
            const double q = halfq(i);
            if (q > c_fit * (1.0 + opt.bound_slack)) {
                record("bound (iv): log-half envelope exceeded by factor " +
                       fmt(q / c_fit) + " at node " + std::to_string(i) + " (r=" +
                       fmt(u.grid[i]) + ")");
                break;
            }
        }
    }

    if (!violations.empty()) fail(ErrorCode::BoundViolation, violations);
    return rep;
}

} // namespace pucci
