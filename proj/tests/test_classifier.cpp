#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "pucci/barriers.hpp"
#include "pucci/classifier.hpp"
#include "pucci/errors.hpp"
#include "pucci/monotone_scheme.hpp"
#include "support/checks.hpp"

using namespace pucci;

namespace {

ConstantSet cset(double lambda, double Lambda, int N, double mu, double p) {
    ProblemParams prm;
    prm.lambda = lambda;
    prm.Lambda = Lambda;
    prm.N = N;
    prm.mu = mu;
    prm.p = p;
    return derive_constants(prm);
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const DomainError& e) {
        return e.code();
    }
    return ErrorCode::BadInput;   // sentinel; callers pair with CHECK_THROWS_AS
}

RadialFunction power_profile(const LogGrid& g, double c, double expo) {
    return RadialFunction::analytic(g, [&](double r, double& u, double& du, double& ddu) {
        u = c * std::pow(r, -expo);
        du = -expo * u / r;
        ddu = expo * (expo + 1.0) * u / (r * r);
    });
}

RadialFunction log_profile(const LogGrid& g, double a, double expo) {
    // a r^{-expo} (-log r)^{-expo/2}; derivatives unused by the classifier
    return RadialFunction::analytic(g, [&](double r, double& u, double& du, double& ddu) {
        u = a * std::pow(r, -expo) * std::pow(-std::log(r), -0.5 * expo);
        du = 0.0;
        ddu = 0.0;
    });
}

// u_alpha(r) = alpha^{2/(1-p)} u(r/alpha) on the alpha-scaled grid
RadialFunction rescale(const RadialFunction& u, double alpha, double p) {
    const double amp = std::pow(alpha, 2.0 / (1.0 - p));
    std::vector<double> r(u.grid.nodes());
    for (double& x : r) x *= alpha;
    std::vector<double> v(u.u);
    for (double& x : v) x *= amp;
    return RadialFunction::from_samples(LogGrid::from_nodes(std::move(r)), std::move(v));
}

} // namespace

TEST_SUITE("classifier") {

TEST_CASE("synthetic closed forms recover their constants") {
    SUBCASE("exact power solution, subcritical and supercritical") {
        for (double p : {2.0, 16.0}) {
            const ConstantSet cs = cset(1, 2, 5, 0.25, p);
            const double K = *cs.K;
            const double m = 2.0 / (p - 1.0);
            const LogGrid g(1e-9, 1.0, 1200);
            const AsymptoticClass ac = classify(power_profile(g, K, m), cs);
            CHECK(ac.variant == AsymptoticVariant::PowerK);
            CHECK(testsup::rel_err(ac.constant, K) < 1e-10);
            CHECK(std::abs(ac.diagnostics.slope + m) < 1e-12);
            CHECK(ac.diagnostics.fit_residual < 1e-12);
            CHECK(ac.diagnostics.regime_consistent);
        }
    }

    SUBCASE("tau-plus sub-barrier samples: correction vanishes in the tail") {
        const ConstantSet cs = cset(1, 2, 5, 0.25, 2.0);
        const Barrier b = make_barrier(BarrierKind::TauPlusSub, cs);
        const double eps = b.params().eps.value();
        // stop short of r = 1 where the sub-barrier vanishes
        const AsymptoticClass ac = classify(b.sample(LogGrid(1e-12, 0.5, 1600)), cs);
        CHECK(ac.variant == AsymptoticVariant::TauPlus);
        CHECK(testsup::rel_err(ac.constant, eps) < 1e-3);
        CHECK(std::abs(ac.diagnostics.slope + cs.tau_plus) < 1e-3);
        CHECK(ac.diagnostics.regime_consistent);   // subcritical admits tau+
    }

    SUBCASE("pure tau-minus tail in the intermediate regime") {
        const ConstantSet cs = cset(1, 2, 5, 0.25, 5.0);
        const LogGrid g(1e-9, 0.9, 900);
        const AsymptoticClass ac = classify(power_profile(g, 0.7, cs.tau_minus), cs);
        CHECK(ac.variant == AsymptoticVariant::TauMinus);
        CHECK(testsup::rel_err(ac.constant, 0.7) < 1e-10);
        CHECK(ac.diagnostics.regime_consistent);
    }

    SUBCASE("log-corrected critical profile") {
        const ConstantSet cs0 = cset(1, 2, 5, 0.25, 2.0);
        const ConstantSet cs = cset(1, 2, 5, 0.25, cs0.p_star_star);
        const LogGrid g(1e-9, 0.9, 900);
        const AsymptoticClass ac = classify(log_profile(g, cs.K_bar, cs.tau_minus), cs);
        CHECK(ac.variant == AsymptoticVariant::LogCritical);
        CHECK(testsup::rel_err(ac.constant, cs.K_bar) < 1e-6);
        CHECK(ac.diagnostics.fit_residual < 1e-12);
        CHECK(ac.diagnostics.regime_consistent);
    }
}

TEST_CASE("regime decides the tau-minus / log-critical split") {
    const ConstantSet cs0 = cset(1, 2, 5, 0.25, 2.0);
    const double pss = cs0.p_star_star;
    const LogGrid g(1e-9, 0.9, 900);

    SUBCASE("pure power tail at p** is reported as TauMinus, not forced critical") {
        const ConstantSet cs = cset(1, 2, 5, 0.25, pss);
        const AsymptoticClass ac = classify(power_profile(g, 0.4, cs.tau_minus), cs);
        CHECK(ac.variant == AsymptoticVariant::TauMinus);
        CHECK(testsup::rel_err(ac.constant, 0.4) < 1e-10);
        // at p** only the log-corrected profile is regime-admissible
        CHECK_FALSE(ac.diagnostics.regime_consistent);
        ClassifyOptions strict;
        strict.check_regime = true;
        CHECK_THROWS_AS((void)classify(power_profile(g, 0.4, cs.tau_minus), cs, 3.0, strict),
                        DomainError);
        CHECK(code_of([&] {
                  (void)classify(power_profile(g, 0.4, cs.tau_minus), cs, 3.0, strict);
              }) == ErrorCode::RegimeMismatch);
    }

    SUBCASE("log-corrected data away from p** stays in the power family") {
        const ConstantSet cs = cset(1, 2, 5, 0.25, 5.0);
        const AsymptoticClass ac = classify(log_profile(g, 0.8, cs.tau_minus), cs);
        CHECK(ac.variant == AsymptoticVariant::TauMinus);   // no log fit outside p**
    }
}

TEST_CASE("ambiguity, tail and positivity gates") {
    const ConstantSet cs2 = cset(1, 2, 5, 0.25, 2.0);
    const double pss = cs2.p_star_star;
    const LogGrid g(1e-9, 0.9, 900);

    SUBCASE("near-critical p is ambiguous at any reachable depth") {
        // 10x outside the regime equality window: the exact-power exponent and
        // tau_minus collapse to ~1e-11 apart while the measured slope carries
        // the log correction, so no candidate matches at the clipped tolerance
        for (double side : {1.0 + 1e-11, 1.0 - 1e-11}) {
            const ConstantSet cs = cset(1, 2, 5, 0.25, pss * side);
            const RadialFunction u = log_profile(g, cs.K_bar, cs.tau_minus);
            CHECK(code_of([&] { (void)classify(u, cs); }) == ErrorCode::AmbiguousClass);
        }
        // at p** exactly the regime gate routes to the corrected fit instead
        const ConstantSet cs = cset(1, 2, 5, 0.25, pss);
        CHECK(classify(log_profile(g, cs.K_bar, cs.tau_minus), cs).variant ==
              AsymptoticVariant::LogCritical);
    }

    SUBCASE("slope matching no candidate") {
        const RadialFunction u = power_profile(g, 1.0, 0.5);
        CHECK(code_of([&] { (void)classify(u, cs2); }) == ErrorCode::AmbiguousClass);
    }

    SUBCASE("depth gate and override") {
        const LogGrid shallow(1e-4, 0.9, 400);
        const RadialFunction u = power_profile(shallow, *cs2.K, 2.0);
        CHECK(code_of([&] { (void)classify(u, cs2); }) == ErrorCode::TailTooShort);
        ClassifyOptions relaxed;
        relaxed.max_r_min = 1e-4;
        CHECK(classify(u, cs2, 3.0, relaxed).variant == AsymptoticVariant::PowerK);
    }

    SUBCASE("window must hold enough nodes") {
        const LogGrid sparse(1e-7, 1.0, 15);
        const RadialFunction u = power_profile(sparse, *cs2.K, 2.0);
        CHECK(code_of([&] { (void)classify(u, cs2); }) == ErrorCode::TailTooShort);
    }

    SUBCASE("input validation") {
        RadialFunction u = power_profile(g, 1.0, cs2.tau_plus);
        u.u[3] = 0.0;
        CHECK(code_of([&] { (void)classify(u, cs2); }) == ErrorCode::NonPositiveSample);

        const ConstantSet no_regime = cset(1, 2, 5, 0.0, 2.0);
        const RadialFunction ok = power_profile(g, 1.0, 0.8);
        CHECK(code_of([&] { (void)classify(ok, no_regime); }) == ErrorCode::RegimeMismatch);

        CHECK(code_of([&] { (void)classify(ok, cs2, 0.0); }) == ErrorCode::BadInput);
        CHECK(code_of([&] { (void)variant_from_string("Nope"); }) == ErrorCode::BadInput);
        CHECK(variant_from_string("PowerK") == AsymptoticVariant::PowerK);
        CHECK(to_string(AsymptoticVariant::LogCritical) == "LogCritical");
    }
}

TEST_CASE("classification is scaling invariant") {
    const LogGrid g(1e-10, 0.5, 1000);

    SUBCASE("exact power branch keeps its constant") {
        const ConstantSet cs = cset(1, 2, 5, 0.25, 2.0);
        const RadialFunction u = power_profile(g, *cs.K, 2.0);
        for (double alpha : {0.5, 0.125}) {
            const AsymptoticClass ac = classify(rescale(u, alpha, 2.0), cs);
            CHECK(ac.variant == AsymptoticVariant::PowerK);
            CHECK(testsup::rel_err(ac.constant, *cs.K) < 1e-10);
        }
    }

    SUBCASE("tau branches transform by the matching power of alpha") {
        const ConstantSet cs = cset(1, 2, 5, 0.25, 2.0);
        const double m = 2.0;
        for (double expo : {cs.tau_plus, cs.tau_minus}) {
            const RadialFunction u = power_profile(g, 0.9, expo);
            const AsymptoticClass base = classify(u, cs);
            for (double alpha : {0.5, 0.25}) {
                const AsymptoticClass ac = classify(rescale(u, alpha, 2.0), cs);
                CHECK(ac.variant == base.variant);
                const double want = 0.9 * std::pow(alpha, expo - m);
                CHECK(testsup::rel_err(ac.constant, want) < 1e-10);
            }
        }
    }

    SUBCASE("log-critical variant survives the shifted logarithm") {
        const ConstantSet cs0 = cset(1, 2, 5, 0.25, 2.0);
        const ConstantSet cs = cset(1, 2, 5, 0.25, cs0.p_star_star);
        const RadialFunction u = log_profile(g, cs.K_bar, cs.tau_minus);
        for (double alpha : {0.5, 0.25}) {
            const AsymptoticClass ac = classify(rescale(u, alpha, cs.prm.p), cs);
            CHECK(ac.variant == AsymptoticVariant::LogCritical);
            CHECK(testsup::rel_err(ac.constant, cs.K_bar) < 0.02);
        }
    }
}

TEST_CASE("scheme limits classify to their construction targets") {
    SUBCASE("tau-plus limit") {
        const ConstantSet cs = cset(1, 2, 5, 0.25, 2.0);
        SchemeOptions so;
        so.n_max = 16;
        so.nodes_per_octave = 32;
        const SchemeResult res = run_scheme(SchemeCase::TauPlus, cs, so);
        const RadialFunction tail = stable_tail(res);
        ClassifyOptions co;
        co.max_r_min = 1e-4;
        const AsymptoticClass ac = classify(tail, cs, 1.0, co);
        CHECK(ac.variant == AsymptoticVariant::TauPlus);
        CHECK(std::abs(ac.diagnostics.slope + cs.tau_plus) < 1e-2);
        CHECK(ac.constant > 0.0);
        CHECK(ac.diagnostics.regime_consistent);
    }

    SUBCASE("tau-minus limit needs the released octaves trimmed") {
        const ConstantSet cs = cset(1, 2, 5, 0.25, 5.0);
        SchemeOptions so;
        so.n_max = 24;
        so.nodes_per_octave = 64;
        const SchemeResult res = run_scheme(SchemeCase::TauMinus, cs, so);

        // raw limit: the deepest decade is the inner boundary layer and the
        // slope matches nothing -- an honest refusal
        const RadialFunction raw = res.limit.head(res.limit.size() - 1);
        ClassifyOptions co;
        co.max_r_min = 1e-7;
        CHECK(code_of([&] { (void)classify(raw, cs, 1.0, co); }) ==
              ErrorCode::AmbiguousClass);

        const RadialFunction tail = stable_tail(res);
        ClassifyOptions cs_opt;
        cs_opt.max_r_min = 1e-5;
        const AsymptoticClass ac = classify(tail, cs, 1.0, cs_opt);
        CHECK(ac.variant == AsymptoticVariant::TauMinus);
        CHECK(std::abs(ac.diagnostics.slope + cs.tau_minus) < 1e-2);
        CHECK(ac.constant > 0.0);
        CHECK(ac.diagnostics.regime_consistent);
    }

    SUBCASE("log-critical limit") {
        const ConstantSet cs0 = cset(1, 2, 5, 0.25, 2.0);
        const ConstantSet cs = cset(1, 2, 5, 0.25, cs0.p_star_star);
        SchemeOptions so;
        so.n_max = 16;
        so.nodes_per_octave = 32;
        const SchemeResult res = run_scheme(SchemeCase::LogCritical, cs, so);
        const RadialFunction tail = stable_tail(res);
        ClassifyOptions co;
        co.max_r_min = 1e-4;
        const AsymptoticClass ac = classify(tail, cs, 1.0, co);
        CHECK(ac.variant == AsymptoticVariant::LogCritical);
        CHECK(std::abs(ac.diagnostics.slope + cs.tau_minus) < 2e-2);
        CHECK(testsup::rel_err(ac.constant, cs.K_bar) < 0.05);
        CHECK(ac.diagnostics.regime_consistent);
    }

    SUBCASE("stable_tail preconditions") {
        const ConstantSet cs = cset(1, 2, 5, 0.25, 2.0);
        SchemeOptions so;
        so.n_max = 6;
        so.nodes_per_octave = 32;
        so.keep_iterates = false;
        const SchemeResult res = run_scheme(SchemeCase::TauPlus, cs, so);
        CHECK(code_of([&] { (void)stable_tail(res); }) == ErrorCode::InsufficientTail);
        SchemeOptions keep = so;
        keep.keep_iterates = true;
        CHECK(code_of([&] {
                  (void)stable_tail(run_scheme(SchemeCase::TauPlus, cs, keep), 0.0);
              }) == ErrorCode::BadInput);
    }
}

TEST_CASE("asymptotic bound checks") {
    const LogGrid g(1e-8, 0.9, 900);

    SUBCASE("exact power solution passes with constant exactly K") {
        const ConstantSet cs = cset(1, 2, 5, 0.25, 2.0);
        const BoundsReport rep = check_asymptotic_bounds(power_profile(g, *cs.K, 2.0), cs);
        CHECK(testsup::rel_err(rep.power_constant, *cs.K) < 1e-12);
        CHECK(std::abs(rep.power_slope) < 1e-12);
        CHECK(rep.unbounded_observed);
        CHECK_FALSE(rep.v_check_applies);   // p = 2 is below p*
        CHECK_FALSE(rep.log_half_applies);
    }

    SUBCASE("tau-plus data in the intermediate regime fails the monotone v-check") {
        const ConstantSet cs = cset(1, 2, 5, 0.25, 5.0);
        const RadialFunction u = power_profile(g, 1.0, cs.tau_plus);
        CHECK(code_of([&] { (void)check_asymptotic_bounds(u, cs); }) ==
              ErrorCode::BoundViolation);
        try {
            (void)check_asymptotic_bounds(u, cs);
        } catch (const DomainError& e) {
            CHECK(std::string(e.what()).find("bound (iii)") != std::string::npos);
        }
    }

    SUBCASE("growth beyond r^{-2/(p-1)} fails bound (i)") {
        const ConstantSet cs = cset(1, 2, 5, 0.25, 16.0);
        const RadialFunction u = power_profile(g, 1.0, cs.tau_plus);   // tau+ > 2/15
        try {
            (void)check_asymptotic_bounds(u, cs);
            CHECK(false);
        } catch (const DomainError& e) {
            CHECK(e.code() == ErrorCode::BoundViolation);
            CHECK(std::string(e.what()).find("bound (i)") != std::string::npos);
        }
    }

    SUBCASE("tau-minus scheme output passes all applicable bounds") {
        const ConstantSet cs = cset(1, 2, 5, 0.25, 5.0);
        SchemeOptions so;
        so.n_max = 16;
        so.nodes_per_octave = 32;
        const SchemeResult res = run_scheme(SchemeCase::TauMinus, cs, so);
        const RadialFunction trimmed = res.limit.head(res.limit.size() - 1);
        const BoundsReport rep = check_asymptotic_bounds(trimmed, cs);
        CHECK(rep.v_check_applies);
        CHECK(rep.v_worst_drop >= -1e-6);
        CHECK(rep.unbounded_observed);
        CHECK(rep.power_slope > -0.02);
    }

    SUBCASE("log-half envelope at p** holds with the fitted constant") {
        const ConstantSet cs0 = cset(1, 2, 5, 0.25, 2.0);
        const ConstantSet cs = cset(1, 2, 5, 0.25, cs0.p_star_star);
        const BoundsReport rep =
            check_asymptotic_bounds(log_profile(g, cs.K_bar, cs.tau_minus), cs);
        CHECK(rep.log_half_applies);
        CHECK(testsup::rel_err(rep.log_half_constant, cs.K_bar) < 1e-12);
        CHECK(rep.v_check_applies);
        CHECK(rep.v_worst_drop >= -1e-9);
    }

    SUBCASE("bounds input validation") {
        const ConstantSet cs = cset(1, 2, 5, 0.25, 2.0);
        RadialFunction u = power_profile(g, 1.0, 2.0);
        u.u[0] = -1.0;
        CHECK(code_of([&] { (void)check_asymptotic_bounds(u, cs); }) ==
              ErrorCode::NonPositiveSample);
        BoundsOptions bad;
        bad.mono_tol = 0.0;
        const RadialFunction ok = power_profile(g, 1.0, 2.0);
        CHECK(code_of([&] { (void)check_asymptotic_bounds(ok, cs, bad); }) ==
              ErrorCode::BadInput);
    }
}

TEST_CASE("classification is deterministic") {
    const ConstantSet cs = cset(1, 2, 5, 0.25, 2.0);
    const LogGrid g(1e-9, 0.9, 700);
    const RadialFunction u = power_profile(g, *cs.K, 2.0);
    const AsymptoticClass a = classify(u, cs);
    const AsymptoticClass b = classify(u, cs);
    CHECK(a.constant == b.constant);
    CHECK(a.diagnostics.slope == b.diagnostics.slope);
    CHECK(a.diagnostics.fit_residual == b.diagnostics.fit_residual);
}

} // TEST_SUITE
