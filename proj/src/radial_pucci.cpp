#include "pucci/radial_pucci.hpp"

#include <cmath>
#include <string>

#include "pucci/errors.hpp"

namespace pucci {

double pucci_radial(double ddu, double du_over_r, const ProblemParams& prm,
                    PucciSign sign) {
    const double hi = (sign == PucciSign::Plus) ? prm.Lambda : prm.lambda;
    const double lo = (sign == PucciSign::Plus) ? prm.lambda : prm.Lambda;
    const double a = (ddu >= 0.0) ? hi : lo;
    const double b = (du_over_r >= 0.0) ? hi : lo;
    return a * ddu + double(prm.N - 1) * b * du_over_r;
}

void pucci_coefficients(double ddu, double du_over_r, const ProblemParams& prm,
                        PucciSign sign, double scale, double& c2, double& c1) {
    const double hi = (sign == PucciSign::Plus) ? prm.Lambda : prm.lambda;
    const double lo = (sign == PucciSign::Plus) ? prm.lambda : prm.Lambda;
    const double dead = 1e-14 * std::abs(scale);
    c2 = (ddu >= -dead) ? hi : lo;
    c1 = double(prm.N - 1) * ((du_over_r >= -dead) ? hi : lo);
}

namespace {

void need_superlinear(const ProblemParams& prm) {
    if (!prm.has_p() || !(prm.p > 1.0))
        fail(ErrorCode::SublinearExponent, "residual needs p > 1");
}

} // namespace

std::vector<double> residual_main(const RadialFunction& u, const ProblemParams& prm) {
    need_superlinear(prm);
    const std::size_t n = u.size();
    std::vector<double> res(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = u.grid[i];
        if (!(u.u[i] > 0.0))
            fail(ErrorCode::NonPositiveSample,
                 "residual_main: u <= 0 at node " + std::to_string(i) +
                 " (r=" + std::to_string(r) + ")");
        res[i] = pucci_radial(u.ddu[i], u.du[i] / r, prm) +
                 prm.mu * u.u[i] / (r * r) - std::pow(u.u[i], prm.p);
    }
    return res;
}

std::vector<double> residual_main_scale(const RadialFunction& u, const ProblemParams& prm) {
    need_superlinear(prm);
    const std::size_t n = u.size();
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = u.grid[i];
        s[i] = std::pow(std::abs(u.u[i]), prm.p) +
               std::abs(prm.mu) * std::abs(u.u[i]) / (r * r);
    }
    return s;
}

std::vector<double> residual_linear(const RadialFunction& u, const ProblemParams& prm,
                                    PucciSign sign) {
    const std::size_t n = u.size();
    std::vector<double> res(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = u.grid[i];
        res[i] = pucci_radial(u.ddu[i], u.du[i] / r, prm, sign) +
                 prm.mu * u.u[i] / (r * r);
    }
    return res;
}

std::vector<double> residual_linear_scale(const RadialFunction& u, const ProblemParams& prm,
                                          PucciSign) {
    const std::size_t n = u.size();
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = u.grid[i];
        s[i] = prm.Lambda * std::abs(u.ddu[i]) +
               double(prm.N - 1) * prm.Lambda * std::abs(u.du[i]) / r +
               std::abs(prm.mu) * std::abs(u.u[i]) / (r * r);
    }
    return s;
}

std::vector<double> residual_v_equation(const RadialFunction& v, const ConstantSet& cs) {
    need_superlinear(cs.prm);
    const double ac = 1.0 + 2.0 * (cs.tau - cs.tau_minus);
    const double q = (cs.prm.p - 1.0) * cs.tau_minus;
    const std::size_t n = v.size();
    std::vector<double> res(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = v.grid[i];
        if (v.u[i] < 0.0)
            fail(ErrorCode::NonPositiveSample,
                 "residual_v_equation: v < 0 at node " + std::to_string(i));
        res[i] = v.ddu[i] + ac * v.du[i] / r -
                 std::pow(v.u[i], cs.prm.p) / (cs.prm.Lambda * std::pow(r, q));
    }
    return res;
}

std::vector<double> residual_v_equation_scale(const RadialFunction& v, const ConstantSet& cs) {
    need_superlinear(cs.prm);
    const double ac = 1.0 + 2.0 * (cs.tau - cs.tau_minus);
    const double q = (cs.prm.p - 1.0) * cs.tau_minus;
    const std::size_t n = v.size();
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = v.grid[i];
        s[i] = std::abs(v.ddu[i]) + ac * std::abs(v.du[i]) / r +
               std::pow(std::abs(v.u[i]), cs.prm.p) / (cs.prm.Lambda * std::pow(r, q));
    }
    return s;
}

} // namespace pucci
