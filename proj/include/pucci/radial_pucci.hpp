#pragma once

#include <vector>

#include "pucci/constants.hpp"
#include "pucci/grid.hpp"

namespace pucci {

// Extremal operator on a radial Hessian whose eigenvalues are ddu (simple)
// and du/r (multiplicity N-1): each eigenvalue contributes Lambda times its
// positive part plus lambda times its negative part (weights swapped for
// the Minus operator).
double pucci_radial(double ddu, double du_over_r, const ProblemParams& prm,
                    PucciSign sign = PucciSign::Plus);

// Frozen branch weights (c2, c1) with M = c2*ddu + c1*du_over_r.  Arguments
// within 1e-14*scale of zero count as nonnegative so that Newton branch
// selection does not chatter across rounding noise.
void pucci_coefficients(double ddu, double du_over_r, const ProblemParams& prm,
                        PucciSign sign, double scale, double& c2, double& c1);

// Pointwise M+(D^2 u) + mu u/r^2 - u^p.  NonPositiveSample unless u > 0 at
// every node, SublinearExponent unless p > 1.
std::vector<double> residual_main(const RadialFunction& u, const ProblemParams& prm);
// reference magnitude u^p + |mu| u/r^2 for relative reporting
std::vector<double> residual_main_scale(const RadialFunction& u, const ProblemParams& prm);

// Linear part only: M+(D^2 u) + mu u/r^2, no sign restriction on u.
std::vector<double> residual_linear(const RadialFunction& u, const ProblemParams& prm,
                                    PucciSign sign = PucciSign::Plus);
std::vector<double> residual_linear_scale(const RadialFunction& u, const ProblemParams& prm,
                                          PucciSign sign = PucciSign::Plus);

// Transformed unknown v = r^{tau_minus} u:
//   v'' + (1 + 2(tau - tau_minus)) v'/r - v^p / (Lambda r^{(p-1) tau_minus}).
// NonPositiveSample if v < 0 anywhere (v == 0 is allowed).
std::vector<double> residual_v_equation(const RadialFunction& v, const ConstantSet& cs);
std::vector<double> residual_v_equation_scale(const RadialFunction& v, const ConstantSet& cs);

} // namespace pucci
