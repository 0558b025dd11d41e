#include "pucci/constants.hpp"

#include <cmath>
#include <sstream>

#include "pucci/errors.hpp"

namespace pucci {

namespace {
const double NaN = std::numeric_limits<double>::quiet_NaN();
}

std::string_view to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidEllipticity:        return "InvalidEllipticity";
        case ErrorCode::MuAboveEigenvalue:         return "MuAboveEigenvalue";
        case ErrorCode::DegenerateTau:             return "DegenerateTau";
        case ErrorCode::SublinearExponent:         return "SublinearExponent";
        case ErrorCode::KUndefined:                return "KUndefined";
        case ErrorCode::GridTooSmall:              return "GridTooSmall";
        case ErrorCode::NonPositiveSample:         return "NonPositiveSample";
        case ErrorCode::RegimeMismatch:            return "RegimeMismatch";
        case ErrorCode::ConstraintViolation:       return "ConstraintViolation";
        case ErrorCode::OutOfValidity:             return "OutOfValidity";
        case ErrorCode::CertificationFailure:      return "CertificationFailure";
        case ErrorCode::NegativeX:                 return "NegativeX";
        case ErrorCode::InsufficientTail:          return "InsufficientTail";
        case ErrorCode::StepFailure:               return "StepFailure";
        case ErrorCode::NewtonDivergence:          return "NewtonDivergence";
        case ErrorCode::NonMonotoneOperator:       return "NonMonotoneOperator";
        case ErrorCode::MonotonicityViolation:     return "MonotonicityViolation";
        case ErrorCode::BracketViolation:          return "BracketViolation";
        case ErrorCode::TailTooShort:              return "TailTooShort";
        case ErrorCode::AmbiguousClass:            return "AmbiguousClass";
        case ErrorCode::BoundViolation:            return "BoundViolation";
        case ErrorCode::HypothesisViolation:       return "HypothesisViolation";
        case ErrorCode::GrowthHypothesisViolation: return "GrowthHypothesisViolation";
        case ErrorCode::BadInput:                  return "BadInput";
    }
    return "UnknownError";
}

void validate(const ProblemParams& prm) {
    if (!(prm.lambda > 0.0) || !(prm.lambda <= prm.Lambda) || !std::isfinite(prm.Lambda))
        fail(ErrorCode::InvalidEllipticity,
             "need 0 < lambda <= Lambda < inf, got lambda=" + std::to_string(prm.lambda) +
             " Lambda=" + std::to_string(prm.Lambda));
    if (prm.N < 2)
        fail(ErrorCode::InvalidEllipticity, "need N >= 2, got N=" + std::to_string(prm.N));
    if (!std::isfinite(prm.mu))
        fail(ErrorCode::InvalidEllipticity, "mu must be finite");
}

int regime_rank(RegimeKind k) noexcept {
    switch (k) {
        case RegimeKind::Subcritical:   return 0;
        case RegimeKind::Intermediate:  return 1;
        case RegimeKind::LogCritical:   return 2;
        case RegimeKind::Supercritical: return 3;
    }
    return -1;
}

std::string_view to_string(RegimeKind k) {
    switch (k) {
        case RegimeKind::Subcritical:   return "Subcritical";
        case RegimeKind::Intermediate:  return "Intermediate";
        case RegimeKind::LogCritical:   return "LogCritical";
        case RegimeKind::Supercritical: return "Supercritical";
    }
    return "?";
}

ConstantSet derive_constants(const ProblemParams& prm) {
    validate(prm);
    ConstantSet cs;
    cs.prm = prm;

    const double lam = prm.lambda, Lam = prm.Lambda;
    cs.Ntilde_plus = (lam / Lam) * (prm.N - 1) + 1.0;
    cs.Ntilde_minus = (Lam / lam) * (prm.N - 1) + 1.0;
    cs.tau = 0.5 * (cs.Ntilde_plus - 2.0);
    cs.tau_minus_op = 0.5 * (cs.Ntilde_minus - 2.0);
    cs.lambda_bar = Lam * cs.tau * cs.tau;
    cs.lambda_bar_minus = lam * cs.tau_minus_op * cs.tau_minus_op;

    if (prm.mu > cs.lambda_bar)
        fail(ErrorCode::MuAboveEigenvalue,
             "mu=" + std::to_string(prm.mu) + " exceeds lambda_bar=" +
             std::to_string(cs.lambda_bar));

    const double q = prm.mu / Lam;         // tau_plus * tau_minus
    const double disc = cs.tau * cs.tau - q;
    cs.degenerate = (disc == 0.0) || (prm.mu == cs.lambda_bar);
    if (cs.degenerate) {
        cs.tau_plus = cs.tau_minus = cs.tau;
    } else if (cs.tau >= 0.0) {
        // cancellation-free root first, the other one via the product
        cs.tau_plus = cs.tau + std::sqrt(disc);
        cs.tau_minus = (cs.tau_plus != 0.0) ? q / cs.tau_plus : cs.tau - std::sqrt(disc);
    } else {
        cs.tau_minus = cs.tau - std::sqrt(disc);
        cs.tau_plus = q / cs.tau_minus;
    }

    cs.p_star = (cs.tau_plus > 0.0) ? 1.0 + 2.0 / cs.tau_plus : NaN;
    cs.p_star_star = (cs.tau_minus > 0.0) ? 1.0 + 2.0 / cs.tau_minus : NaN;

    const bool mu_gate = (prm.mu > 0.0) && (prm.mu < cs.lambda_bar);
    cs.K_bar = mu_gate
        ? std::pow(Lam * cs.tau_minus * (cs.tau - cs.tau_minus), 0.5 * cs.tau_minus)
        : NaN;

    if (prm.has_p()) {
        const double m = 2.0 / (prm.p - 1.0);
        cs.lambda1 = m - cs.tau_plus;
        cs.lambda2 = m - cs.tau_minus;
        if (prm.p > 1.0 && cs.lambda1 * cs.lambda2 > 0.0)
            cs.K = std::pow(Lam * cs.lambda1 * cs.lambda2, 1.0 / (prm.p - 1.0));
    } else {
        cs.lambda1 = cs.lambda2 = NaN;
    }

    cs.in_regime = mu_gate && prm.has_p() && prm.p > 1.0;
    return cs;
}

std::pair<double, double> critical_exponents(const ConstantSet& cs) {
    if (cs.degenerate)
        fail(ErrorCode::DegenerateTau, "tau_plus == tau_minus (mu == lambda_bar)");
    if (!(cs.tau_minus > 0.0))
        fail(ErrorCode::DegenerateTau, "tau_minus <= 0 (mu <= 0): p_star_star undefined");
    return {cs.p_star, cs.p_star_star};
}

double explicit_K(double p, const ConstantSet& cs) {
    if (!(p > 1.0))
        fail(ErrorCode::SublinearExponent, "explicit_K needs p > 1");
    const double m = 2.0 / (p - 1.0);
    const double l1 = m - cs.tau_plus, l2 = m - cs.tau_minus;
    if (!(l1 * l2 > 0.0))
        fail(ErrorCode::KUndefined,
             "K undefined for p_star <= p <= p_star_star (p=" + std::to_string(p) + ")");
    return std::pow(cs.prm.Lambda * l1 * l2, 1.0 / (p - 1.0));
}

double log_critical_Kbar(const ConstantSet& cs) {
    if (cs.degenerate || !(cs.tau_minus > 0.0) || !(cs.tau > cs.tau_minus))
        fail(ErrorCode::DegenerateTau, "K_bar needs 0 < mu < lambda_bar");
    return cs.K_bar;
}

Regime classify_regime(double p, const ConstantSet& cs, double eq_tol) {
    if (!(p > 1.0))
        fail(ErrorCode::SublinearExponent, "regime defined for p > 1 only");
    auto [ps, pss] = critical_exponents(cs);
    // equality with p_star_star is decided first so the log-corrected
    // profile is preferred over the neighbouring open regimes
    if (std::abs(p - pss) <= eq_tol * pss)
        return {RegimeKind::LogCritical, eq_tol};
    if (p < ps) return {RegimeKind::Subcritical, eq_tol};
    if (p < pss) return {RegimeKind::Intermediate, eq_tol};
    return {RegimeKind::Supercritical, eq_tol};
}

void Eigenfunction::eval(double r, double& u, double& du, double& ddu) const {
    if (!(r > 0.0))
        fail(ErrorCode::OutOfValidity, "eigenfunction needs r > 0");
    const double t = tau_exp;
    const double L = -std::log(r);
    const double rp = std::pow(r, -t);
    u = L * rp;
    du = -(rp / r) * (1.0 + t * L);
    ddu = (rp / (r * r)) * (t * (t + 1.0) * L + 2.0 * t + 1.0);
}

Eigenpair principal_eigenpair(const ProblemParams& prm, PucciSign sign) {
    ConstantSet cs = derive_constants(prm);
    Eigenpair ep;
    if (sign == PucciSign::Plus) {
        ep.lambda_bar = cs.lambda_bar;
        ep.phi.tau_exp = cs.tau;
    } else {
        ep.lambda_bar = cs.lambda_bar_minus;
        ep.phi.tau_exp = cs.tau_minus_op;
    }
    return ep;
}

} // namespace pucci
