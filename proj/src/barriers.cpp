#include "pucci/barriers.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pucci/errors.hpp"
#include "pucci/radial_pucci.hpp"

namespace pucci {

std::string_view to_string(BarrierKind k) {
    switch (k) {
        case BarrierKind::PowerSuper:        return "power-super";
        case BarrierKind::PowerK:            return "power-k";
        case BarrierKind::TauPlusSub:        return "tau-plus-sub";
        case BarrierKind::TauPlusSubGeneral: return "tau-plus-sub-general";
        case BarrierKind::TauMinusSub:       return "tau-minus-sub";
        case BarrierKind::LogSub:            return "log-sub";
        case BarrierKind::LogSuper:          return "log-super";
        case BarrierKind::KShiftSub:         return "k-shift-sub";
        case BarrierKind::KShiftSuper:       return "k-shift-super";
        case BarrierKind::EpsSuper:          return "eps-super";
        case BarrierKind::LogHalfSuper:      return "log-half-super";
        case BarrierKind::VLogSub:           return "v-log-sub";
        case BarrierKind::VLogSuper:         return "v-log-super";
    }
    return "?";
}

BarrierKind barrier_kind_from_string(std::string_view name) {
    for (int k = 0; k <= int(BarrierKind::VLogSuper); ++k)
        if (name == to_string(BarrierKind(k))) return BarrierKind(k);
    fail(ErrorCode::BadInput, "unknown barrier kind '" + std::string(name) + "'");
}

namespace {

constexpr double kEqTol = 1e-12;   // relative tolerance deciding p == p**

double val(const std::optional<double>& o, double dflt) { return o ? *o : dflt; }

bool at_log_critical(const ConstantSet& cs) {
    return cs.in_regime && !cs.degenerate && cs.p_star_star == cs.p_star_star &&
           std::abs(cs.prm.p - cs.p_star_star) <= kEqTol * cs.p_star_star;
}

void need_regime(bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::RegimeMismatch, what);
}

// Kbar^(p-1), in the exact product form the inequalities use
double kbar_pm1(const ConstantSet& cs) {
    return cs.prm.Lambda * cs.tau_minus * (cs.tau - cs.tau_minus);
}

struct Assembly {
    BarrierParams bp;
    BarrierDirection dir = BarrierDirection::Super;
    BarrierTarget target = BarrierTarget::MainEquation;
    double r0 = 1.0;
    std::vector<ConstraintEntry> entries;

    // scale > 0 grants non-strict entries 1e-12 relative slack, so that
    // parameters placed exactly at equality survive pow round-trips
    void add(std::string name, double margin, bool strict, double scale = 0.0) {
        if (!strict && scale > 0.0 && margin < 0.0 && margin >= -1e-12 * scale)
            margin = 0.0;
        entries.push_back({std::move(name), margin, strict});
    }
    void bound_r0() {
        add("r0 > 0", r0, true);
        add("r0 <= 1", 1.0 - r0, false);
    }
};

// worst normalized residual of the LogSuper profile over L in [c, 1e6],
// evaluated with the full sign-split operator; exact at p == p**
double log_super_scan_margin(const ConstantSet& cs, double b, double delta, double c) {
    const double tm = cs.tau_minus, s1 = tm / 2.0, s2 = s1 + delta;
    const double p = cs.prm.p, bp = std::pow(b, p - 1.0);
    const double Lam = cs.prm.Lambda, lam = cs.prm.lambda;
    const double mu = cs.prm.mu;
    const int n1 = cs.prm.N - 1;
    auto wplus = [&](double x) { return x >= 0.0 ? Lam * x : lam * x; };

    const double L_lo = c * (1.0 + 1e-12), L_hi = std::max(1e6, 10.0 * c);
    const int n = 4096;
    const double step = std::log(L_hi / L_lo) / (n - 1);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double L = L_lo * std::exp(i * step);
        const double P1 = std::pow(L, -s1), P2 = std::pow(L, -s2);
        const double C = P1 - P2;
        const double Cp = -s1 * P1 / L + s2 * P2 / L;
        const double Cpp = s1 * (s1 + 1.0) * P1 / (L * L) - s2 * (s2 + 1.0) * P2 / (L * L);
        const double B = -tm * C - Cp;
        const double Bp = -tm * Cp - Cpp;
        const double A = -(tm + 1.0) * B - Bp;
        const double nl = bp * std::pow(C, p);
        const double phi = wplus(A) + n1 * wplus(B) + mu * C - nl;
        const double scale = Lam * std::abs(A) + n1 * Lam * std::abs(B) +
                             std::abs(mu) * std::abs(C) + nl;
        worst = std::min(worst, -phi / scale);
    }
    return worst;
}

// per-kind parameter resolution + constraint assembly
Assembly assemble(BarrierKind kind, const ConstantSet& cs, const BarrierParams& in,
                  std::optional<BarrierDirection> dir) {
    Assembly as;
    as.bp = in;
    const ProblemParams& prm = cs.prm;
    const double p = prm.p, Lam = prm.Lambda;
    const double tp = cs.tau_plus, tm = cs.tau_minus, tau = cs.tau;
    const double m = prm.has_p() ? 2.0 / (p - 1.0) : std::numeric_limits<double>::quiet_NaN();

    need_regime(cs.in_regime,
                "barriers need 0 < mu < lambda_bar and p > 1");

    switch (kind) {
    case BarrierKind::PowerSuper: {
        const double c = val(in.c, 1.0), g = val(in.gamma, tau);
        as.bp.c = c;
        as.bp.gamma = g;
        as.dir = BarrierDirection::Super;
        as.r0 = val(in.r0, 1.0);
        as.add("c > 0", c, true);
        as.add("gamma > 0", g, true);
        as.add("gamma >= tau_minus", g - tm, false);
        as.add("gamma <= tau_plus", tp - g, false);
        as.bound_r0();
        break;
    }
    case BarrierKind::PowerK: {
        const double l1l2 = cs.lambda1 * cs.lambda2;
        need_regime(l1l2 > 0.0, "PowerK needs p < p_star or p > p_star_star");
        const double K = std::pow(Lam * l1l2, 1.0 / (p - 1.0));
        const double c = val(in.c, K);
        as.bp.c = c;
        as.dir = dir ? *dir : (c < K ? BarrierDirection::Sub : BarrierDirection::Super);
        as.r0 = val(in.r0, 1.0);
        as.add("lambda1*lambda2 > 0", l1l2, true);
        as.add("c > 0", c, true);
        if (as.dir == BarrierDirection::Sub)
            as.add("c <= K", K - c, false, K);
        else
            as.add("c >= K", c - K, false, K);
        as.bound_r0();
        break;
    }
    case BarrierKind::TauPlusSub:
    case BarrierKind::TauPlusSubGeneral: {
        need_regime(prm.p < cs.p_star, "TauPlusSub needs p < p_star");
        const double cap_d = std::min({tp, 2.0 - (p - 1.0) * tp, 2.0 * (tp - tau)});
        const double d = val(in.delta, 0.5 * cap_d);
        const double bound = Lam * d * (2.0 * (tp - tau) - d);
        as.bp.delta = d;
        as.dir = BarrierDirection::Sub;
        as.add("delta > 0", d, true);
        as.add("delta < tau_plus", tp - d, true);
        as.add("delta < 2 - (p-1) tau_plus", 2.0 - (p - 1.0) * tp - d, true);
        as.add("delta < 2 (tau_plus - tau)", 2.0 * (tp - tau) - d, true);
        if (kind == BarrierKind::TauPlusSub) {
            const double e = val(in.eps, std::pow(std::max(bound, 0.0), 1.0 / (p - 1.0)));
            as.bp.eps = e;
            as.r0 = val(in.r0, 1.0);
            as.add("eps > 0", e, true);
            as.add("eps^(p-1) <= Lambda delta (2(tau_plus - tau) - delta)",
                   bound - std::pow(e, p - 1.0), false, bound);
        } else {
            // default a is shaved below equality so the profile stays
            // strictly positive at r0 = 1 under rounding
            const double a = val(in.a, (1.0 - 1e-8) *
                                       std::pow(std::max(bound, 0.0), 1.0 / (p - 1.0)));
            const double bc = std::pow(a, p) / bound;   // correction amplitude
            as.bp.a = a;
            as.r0 = val(in.r0, std::min(1.0, std::pow(a / bc, 1.0 / d)));
            as.add("a > 0", a, true);
            as.add("a - a^p/(Lambda delta (2(tau_plus - tau) - delta)) r0^delta >= 0",
                   a - bc * std::pow(as.r0, d), false, a);
        }
        as.bound_r0();
        break;
    }
    case BarrierKind::TauMinusSub: {
        need_regime(prm.p < cs.p_star_star, "TauMinusSub needs p < p_star_star");
        const double cap_d = std::min(tm, 2.0 - (p - 1.0) * tm);
        const double d = val(in.delta, 0.5 * cap_d);
        const double bound = Lam * d * (2.0 * (tau - tm) + d);
        const double e = val(in.eps, std::pow(std::max(bound, 0.0) / std::pow(2.0, p),
                                              1.0 / (p - 1.0)));
        as.bp.delta = d;
        as.bp.eps = e;
        as.dir = BarrierDirection::Sub;
        as.r0 = val(in.r0, 1.0);
        as.add("delta > 0", d, true);
        as.add("delta < tau_minus", tm - d, true);
        as.add("delta < 2 - (p-1) tau_minus", 2.0 - (p - 1.0) * tm - d, true);
        as.add("eps > 0", e, true);
        as.add("2^p eps^(p-1) r0^(2 - (p-1) tau_minus - delta) <= "
               "Lambda delta (2(tau - tau_minus) + delta)",
               bound - std::pow(2.0, p) * std::pow(e, p - 1.0) *
                           std::pow(as.r0, 2.0 - (p - 1.0) * tm - d),
               false, bound);
        as.bound_r0();
        break;
    }
    case BarrierKind::LogSub: {
        need_regime(at_log_critical(cs), "LogSub needs p == p_star_star");
        const double a = val(in.a, cs.K_bar), c = val(in.c, std::exp(1.0));
        as.bp.a = a;
        as.bp.c = c;
        as.dir = BarrierDirection::Sub;
        as.r0 = val(in.r0, 1.0);
        as.add("c > 1", c - 1.0, true);
        as.add("a > 0", a, true);
        as.add("a^(p-1) <= Kbar^(p-1)", kbar_pm1(cs) - std::pow(a, p - 1.0),
               false, kbar_pm1(cs));
        as.bound_r0();
        break;
    }
    case BarrierKind::LogSuper: {
        need_regime(at_log_critical(cs), "LogSuper needs p == p_star_star");
        const double b = val(in.b, 2.0 * cs.K_bar);
        const double d = val(in.delta, 1.0), c = val(in.c, std::exp(1.0));
        as.bp.b = b;
        as.bp.delta = d;
        as.bp.c = c;
        as.dir = BarrierDirection::Super;
        as.r0 = val(in.r0, 1.0);
        as.add("c > 1", c - 1.0, true);
        as.add("delta > 0", d, true);
        // amplitudes at or below Kbar lose the super property deep in the
        // tail, so the bound is strict and backed by a full scan in L
        as.add("b > Kbar", b - cs.K_bar, true);
        if (b > cs.K_bar && d > 0.0 && c > 1.0)
            as.add("residual <= 0 for all L in [c, 1e6] (scanned)",
                   log_super_scan_margin(cs, b, d, c), false);
        as.bound_r0();
        break;
    }
    case BarrierKind::KShiftSub:
    case BarrierKind::KShiftSuper: {
        const double l1l2 = cs.lambda1 * cs.lambda2;
        need_regime(l1l2 > 0.0, "KShift barriers need p < p_star or p > p_star_star");
        const double K = std::pow(Lam * l1l2, 1.0 / (p - 1.0));
        const double g = val(in.gamma, (prm.p < cs.p_star) ? 0.5 * (tp + m) : 0.5 * m);
        const double prod = (g - tp) * (g - tm);
        const double kb = std::pow(K, p - 1.0);
        as.bp.gamma = g;
        as.r0 = val(in.r0, 1.0);
        as.add("lambda1*lambda2 > 0", l1l2, true);
        as.add("gamma > 0", g, true);
        as.add("gamma < 2/(p-1)", m - g, true);
        as.add("(gamma - tau_plus)(gamma - tau_minus) > 0", prod, true);
        if (kind == BarrierKind::KShiftSub) {
            const double k1 = val(in.k1, 0.5 * K);
            const double bound = (prod > 0.0)
                ? k1 * (kb - std::pow(k1, p - 1.0)) / (Lam * prod)
                : 0.0;
            // default amplitude sits at its bound, so r0 = 1 always works
            const double a = val(in.a, std::max(std::min(0.999 * k1, bound), 0.0));
            as.bp.k1 = k1;
            as.bp.a = a;
            as.dir = BarrierDirection::Sub;
            as.add("a > 0", a, true);
            as.add("k1 > 0", k1, true);
            as.add("k1 < K", K - k1, true);
            as.add("a r0^(2/(p-1) - gamma) < k1",
                   k1 - a * std::pow(as.r0, m - g), true);
            as.add("a r0^(2/(p-1) - gamma) <= k1 (K^(p-1) - k1^(p-1)) / "
                   "(Lambda (gamma - tau_plus)(gamma - tau_minus))",
                   bound - a * std::pow(as.r0, m - g), false, std::max(bound, 0.0));
        } else {
            const double k2 = val(in.k2, 2.0 * K);
            const double bound = (prod > 0.0)
                ? k2 * (std::pow(k2, p - 1.0) - kb) / (Lam * prod)
                : 0.0;
            const double a = val(in.a, std::max(std::min(k2, bound), 0.0));
            as.bp.k2 = k2;
            as.bp.a = a;
            as.dir = BarrierDirection::Super;
            as.add("a > 0", a, true);
            as.add("k2 > K", k2 - K, true);
            as.add("a r0^(2/(p-1) - gamma) <= k2 (k2^(p-1) - K^(p-1)) / "
                   "(Lambda (gamma - tau_plus)(gamma - tau_minus))",
                   bound - a * std::pow(as.r0, m - g), false, std::max(bound, 0.0));
        }
        as.bound_r0();
        break;
    }
    case BarrierKind::EpsSuper: {
        need_regime(cs.lambda1 * cs.lambda2 <= 0.0,
                    "EpsSuper needs p_star <= p <= p_star_star");
        const double e = val(in.eps, 1.0), cap = val(in.cap, 1.0);
        as.bp.eps = e;
        as.bp.cap = cap;
        as.dir = BarrierDirection::Super;
        as.r0 = val(in.r0, 1.0);
        as.add("eps > 0", e, true);
        as.add("cap >= 0", cap, false);
        as.add("lambda1*lambda2 <= 0", -cs.lambda1 * cs.lambda2, false);
        as.bound_r0();
        break;
    }
    case BarrierKind::LogHalfSuper: {
        need_regime(at_log_critical(cs), "LogHalfSuper needs p == p_star_star");
        const double e = val(in.eps, 1e-3);
        const double bound = 0.5 * Lam * tm * (tm + cs.Ntilde_plus + 2.0);
        const double C = val(in.cap, std::pow(2.0 * bound, 1.0 / (p - 1.0)));
        as.bp.eps = e;
        as.bp.cap = C;
        as.dir = BarrierDirection::Super;
        as.r0 = val(in.r0, std::exp(-0.5) - e);
        as.add("eps > 0", e, true);
        as.add("C^(p-1) >= (Lambda/2) tau_minus (tau_minus + Ntilde_plus + 2)",
               std::pow(C, p - 1.0) - bound, false, bound);
        as.add("-log(r0 + eps) >= 1/2",
               (as.r0 + e > 0.0) ? -std::log(as.r0 + e) - 0.5 : -1.0, false);
        as.add("r0 > 0", as.r0, true);
        break;
    }
    case BarrierKind::VLogSub: {
        need_regime(at_log_critical(cs), "VLogSub needs p == p_star_star");
        const double a = val(in.a, cs.K_bar), c1 = val(in.c1, 1.0);
        as.bp.a = a;
        as.bp.c1 = c1;
        as.dir = BarrierDirection::Sub;
        as.target = BarrierTarget::VEquation;
        as.r0 = val(in.r0, c1 > 0.0 ? 1.0 : 0.99);
        as.add("a > 0", a, true);
        as.add("a^(p-1) <= Kbar^(p-1)", kbar_pm1(cs) - std::pow(a, p - 1.0),
               false, kbar_pm1(cs));
        as.add("c1 >= 0", c1, false);
        as.add("-log r0 + c1 > 0", -std::log(as.r0) + c1, true);
        as.bound_r0();
        break;
    }
    case BarrierKind::VLogSuper: {
        need_regime(at_log_critical(cs), "VLogSuper needs p == p_star_star");
        const double b = val(in.b, 2.0 * cs.K_bar), c2 = val(in.c2, 0.0);
        const double gap = std::pow(b, p - 1.0) - kbar_pm1(cs);
        double r0;
        if (in.r0) {
            r0 = *in.r0;
        } else {
            // half the admissible 1/M budget, and never too close to 1
            const double M_need = (gap > 0.0)
                ? Lam * tm * (tm + 2.0) / (2.0 * gap) : 1e300;
            r0 = std::exp(-std::max(M_need + c2, 0.05 + c2));
        }
        as.bp.b = b;
        as.bp.c2 = c2;
        as.dir = BarrierDirection::Super;
        as.target = BarrierTarget::VEquation;
        as.r0 = r0;
        const double M0 = -std::log(r0) - c2;
        as.add("b > Kbar", b - cs.K_bar, true);
        as.add("-log r0 - c2 > 0", M0, true);
        as.add("b^(p-1) >= Kbar^(p-1) + Lambda tau_minus (tau_minus + 2) / (4 (-log r0 - c2))",
               (M0 > 0.0) ? gap - Lam * tm * (tm + 2.0) / (4.0 * M0) : -1.0,
               false, std::pow(b, p - 1.0));
        as.bound_r0();
        break;
    }
    }
    return as;
}

void enforce(const Assembly& as) {
    for (const ConstraintEntry& e : as.entries) {
        const bool ok = e.strict ? (e.margin > 0.0) : (e.margin >= 0.0);
        if (!ok) {
            std::ostringstream os;
            os << "constraint '" << e.name << "' violated (margin " << e.margin << ")";
            fail(ErrorCode::ConstraintViolation, os.str());
        }
    }
}

} // namespace

Barrier make_barrier(BarrierKind kind, const ConstantSet& cs, const BarrierParams& bp,
                     std::optional<BarrierDirection> dir) {
    Assembly as = assemble(kind, cs, bp, dir);
    enforce(as);
    Barrier b;
    b.kind_ = kind;
    b.dir_ = as.dir;
    b.target_ = as.target;
    b.cs_ = cs;
    b.bp_ = as.bp;
    b.bp_.r0 = as.r0;
    b.r0_ = as.r0;
    b.cert_ = std::move(as.entries);
    return b;
}

BarrierParams default_barrier_params(BarrierKind kind, const ConstantSet& cs) {
    Assembly as = assemble(kind, cs, {}, {});
    as.bp.r0 = as.r0;
    return as.bp;
}

Barrier Barrier::unchecked(BarrierKind k, BarrierDirection dir,
                           const ConstantSet& cs, const BarrierParams& bp) {
    Barrier b;
    b.kind_ = k;
    b.dir_ = dir;
    b.target_ = (k == BarrierKind::VLogSub || k == BarrierKind::VLogSuper)
                    ? BarrierTarget::VEquation : BarrierTarget::MainEquation;
    b.cs_ = cs;
    b.bp_ = bp;
    b.r0_ = bp.r0.value_or(1.0);
    return b;
}

double largest_valid_r0(BarrierKind kind, const ConstantSet& cs, BarrierParams bp) {
    auto ok = [&](double r0) {
        BarrierParams q = bp;
        q.r0 = r0;
        try {
            enforce(assemble(kind, cs, q, {}));
            return true;
        } catch (const DomainError&) {
            return false;
        }
    };
    if (ok(1.0)) return 1.0;
    double lo = 1e-12, hi = 1.0;
    if (!ok(lo)) {
        // not an r0 problem: surface the real violation
        bp.r0 = lo;
        enforce(assemble(kind, cs, bp, {}));
        fail(ErrorCode::ConstraintViolation, "no admissible r0 in [1e-12, 1]");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

// ---- evaluation -----------------------------------------------------------

namespace {

struct Triple {
    double u = 0, du = 0, ddu = 0;

    void add_power(double c, double g, double r) {
        const double v = c * std::pow(r, -g);
        u += v;
        du += -g * v / r;
        ddu += g * (g + 1.0) * v / (r * r);
    }
    // A r^-beta (shift - log r)^-s
    void add_logpow(double A, double beta, double s, double shift, double r) {
        const double L = shift - std::log(r);
        const double P = std::pow(L, -s);
        const double rp = std::pow(r, -beta);
        u += A * rp * P;
        du += A * (rp / r) * (-beta * P + s * P / L);
        ddu += A * (rp / (r * r)) *
               (beta * (beta + 1.0) * P - s * (2.0 * beta + 1.0) * P / L +
                s * (s + 1.0) * P / (L * L));
    }
    // A (shift - log r)^-s, v-equation profile
    void add_vlog(double A, double s, double shift, double r) {
        const double L = shift - std::log(r);
        const double P = std::pow(L, -s);
        u += A * P;
        du += A * s * (P / L) / r;
        ddu += A * s * ((s + 1.0) * P / (L * L) - P / L) / (r * r);
    }
    // C r^-beta (-log(r + eps))^-s
    void add_loghalf(double C, double beta, double s, double eps, double r) {
        const double re = r + eps;
        const double G = -std::log(re);
        const double P = std::pow(G, -s);
        const double rp = std::pow(r, -beta);
        u += C * rp * P;
        du += C * (-beta * (rp / r) * P + s * rp * (P / G) / re);
        ddu += C * (beta * (beta + 1.0) * (rp / (r * r)) * P -
                    2.0 * beta * s * (rp / r) * (P / G) / re +
                    s * (s + 1.0) * rp * (P / (G * G)) / (re * re) +
                    s * rp * (P / G) / (re * re));
    }
};

} // namespace

void Barrier::eval(double r, double& u, double& du, double& ddu) const {
    if (!(r > 0.0) || r > r0_ * (1.0 + 1e-12))
        fail(ErrorCode::OutOfValidity,
             "barrier evaluated at r=" + std::to_string(r) + " outside (0, " +
             std::to_string(r0_) + "]");
    const double p = cs_.prm.p;
    const double m = 2.0 / (p - 1.0);
    const double tp = cs_.tau_plus, tm = cs_.tau_minus, tau = cs_.tau;
    const double s = tm / 2.0;
    Triple t;
    switch (kind_) {
    case BarrierKind::PowerSuper:
        t.add_power(*bp_.c, *bp_.gamma, r);
        break;
    case BarrierKind::PowerK:
        t.add_power(*bp_.c, m, r);
        break;
    case BarrierKind::TauPlusSub:
        t.add_power(*bp_.eps, tp, r);
        t.add_power(-*bp_.eps, tp - *bp_.delta, r);
        break;
    case BarrierKind::TauPlusSubGeneral: {
        const double d = *bp_.delta, a = *bp_.a;
        const double bc = std::pow(a, p) /
                          (cs_.prm.Lambda * d * (2.0 * (tp - tau) - d));
        t.add_power(a, tp, r);
        t.add_power(-bc, tp - d, r);
        break;
    }
    case BarrierKind::TauMinusSub:
        t.add_power(*bp_.eps, tm, r);
        t.add_power(*bp_.eps, tm - *bp_.delta, r);
        break;
    case BarrierKind::LogSub:
        t.add_logpow(*bp_.a, tm, s, *bp_.c, r);
        break;
    case BarrierKind::LogSuper:
        t.add_logpow(*bp_.b, tm, s, *bp_.c, r);
        t.add_logpow(-*bp_.b, tm, s + *bp_.delta, *bp_.c, r);
        break;
    case BarrierKind::KShiftSub:
        t.add_power(*bp_.k1, m, r);
        t.add_power(-*bp_.a, *bp_.gamma, r);
        break;
    case BarrierKind::KShiftSuper:
        t.add_power(*bp_.k2, m, r);
        t.add_power(*bp_.a, *bp_.gamma, r);
        break;
    case BarrierKind::EpsSuper:
        t.add_power(*bp_.eps, m, r);
        t.add_power(*bp_.cap, tm, r);
        break;
    case BarrierKind::LogHalfSuper:
        t.add_loghalf(*bp_.cap, tm, s, *bp_.eps, r);
        break;
    case BarrierKind::VLogSub:
        t.add_vlog(*bp_.a, s, *bp_.c1, r);
        break;
    case BarrierKind::VLogSuper:
        t.add_vlog(*bp_.b, s, -*bp_.c2, r);
        break;
    }
    u = t.u;
    du = t.du;
    ddu = t.ddu;
}

RadialFunction Barrier::sample(const LogGrid& g) const {
    return RadialFunction::analytic(g, [this](double r, double& u, double& du, double& ddu) {
        eval(r, u, du, ddu);
    });
}

// ---- certification --------------------------------------------------------

SignCertificate try_certify_sign(const Barrier& b, const LogGrid& g, double tol) {
    if (g.r_max() > b.validity_radius() * (1.0 + 1e-12))
        fail(ErrorCode::OutOfValidity, "grid exceeds the barrier validity radius");
    const ConstantSet& cs = b.constants();
    const ProblemParams& prm = cs.prm;
    const double p = prm.p;
    const double ac = 1.0 + 2.0 * (cs.tau - cs.tau_minus);
    const double q = (p - 1.0) * cs.tau_minus;
    const bool veq = b.target() == BarrierTarget::VEquation;
    const double sgn = (b.direction() == BarrierDirection::Sub) ? 1.0 : -1.0;

    SignCertificate out;
    out.tol = tol;
    out.holds = true;
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g[i];
        double u, du, ddu;
        b.eval(r, u, du, ddu);
        if (u < 0.0)
            fail(ErrorCode::NonPositiveSample,
                 "barrier negative inside its validity range at r=" + std::to_string(r));
        double res, scale;
        if (veq) {
            const double w = cs.prm.Lambda * std::pow(r, q);
            res = ddu + ac * du / r - std::pow(u, p) / w;
            scale = std::abs(ddu) + ac * std::abs(du) / r + std::pow(u, p) / w;
        } else {
            res = pucci_radial(ddu, du / r, prm) + prm.mu * u / (r * r) - std::pow(u, p);
            scale = std::pow(u, p) + std::abs(prm.mu) * u / (r * r);
        }
        // signed margin: nonnegative iff the residual sign is right
        const double margin = (scale > 0.0) ? sgn * res / scale
                                            : ((sgn * res >= 0.0) ? 0.0 : -1.0);
        if (margin < out.worst_margin) {
            out.worst_margin = margin;
            out.worst_node = i;
            out.worst_r = r;
        }
        if (margin < -tol) {
            out.holds = false;
            ++out.violations;
        }
    }
    return out;
}

SignCertificate certify_sign(const Barrier& b, const LogGrid& g, double tol) {
    SignCertificate c = try_certify_sign(b, g, tol);
    if (!c.holds) {
        std::ostringstream os;
        os << to_string(b.kind()) << " "
           << (b.direction() == BarrierDirection::Sub ? "sub" : "super")
           << " certification failed: " << c.violations << " node(s), worst at r="
           << c.worst_r << " (node " << c.worst_node << ", margin " << c.worst_margin
           << ")";
        fail(ErrorCode::CertificationFailure, os.str());
    }
    return c;
}

bool pairing_holds(const Barrier& sub, const Barrier& super, const LogGrid& g, double tol) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        double us, dus, ddus, uS, duS, dduS;
        sub.eval(g[i], us, dus, ddus);
        super.eval(g[i], uS, duS, dduS);
        if (us > uS * (1.0 + tol) + 1e-300) return false;
    }
    return true;
}

} // namespace pucci
