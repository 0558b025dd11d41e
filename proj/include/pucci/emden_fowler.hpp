#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "pucci/constants.hpp"
#include "pucci/grid.hpp"

namespace pucci {

// State of the transformed unknown x(t) = e^{2t/(p-1)} u(e^t), t = log r.
struct EFState {
    double t = 0;
    double x = 0;
    double xp = 0;   // dx/dt
};

enum class EFDirection { Forward, Backward };
enum class EFTermination { SpanReached, BlowUp, Underflow, StepFailure };

std::string_view to_string(EFDirection d);
std::string_view to_string(EFTermination t);

struct EFOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double x_max = 1e12;     // BlowUp threshold
    double x_min = 1e-300;   // Underflow threshold
    double h_init = 1e-3;
    double h_max = 1.0;
    std::size_t max_steps = 5'000'000;
    double fixed_step = 0;   // > 0 disables adaptivity (order studies)
};

struct EFTrajectory {
    std::vector<EFState> states;   // t strictly monotone in direction
    EFDirection direction = EFDirection::Forward;
    EFTermination termination = EFTermination::SpanReached;
    std::size_t accepted = 0;
    std::size_t rejected = 0;

    const EFState& front() const { return states.front(); }
    const EFState& back() const { return states.back(); }
    double span() const { return states.empty() ? 0.0 : back().t - front().t; }
};

// x'' = (lambda1 + lambda2) x' - lambda1 lambda2 x + x^p / Lambda.
// NegativeX when x < 0.
double ef_rhs(double x, double xp, const ConstantSet& cs);
double ef_rhs(const EFState& s, const ConstantSet& cs);

struct Equilibrium {
    double x = 0;
    double nu1 = 0;   // linearization eigenvalues, nu1 <= nu2
    double nu2 = 0;
};

// Always contains the origin (eigenvalues lambda1, lambda2); contains the
// constant-solution level K iff K is defined (lambda1*lambda2 > 0).
std::vector<Equilibrium> ef_equilibria(const ConstantSet& cs);

// Adaptive embedded Runge-Kutta 5(4); span > 0 is the |t|-distance covered.
EFTrajectory integrate_ef(const ConstantSet& cs, EFState start, double span,
                          EFDirection dir, const EFOptions& opt = {});

// Samples of the transform of a radial function on its original grid; xpp
// carries the second derivative so the round trip is exact node arithmetic.
struct EFSamples {
    LogGrid grid;
    double p = 0;
    std::vector<double> t, x, xp, xpp;
};

EFSamples to_ef(const RadialFunction& u, double p);
RadialFunction from_ef(const EFSamples& s);

// Cubic-Hermite resampling of a trajectory onto a radial grid; every node
// of g must map into the trajectory's t-range (else OutOfValidity).
RadialFunction trajectory_to_radial(const EFTrajectory& traj, const ConstantSet& cs,
                                    const LogGrid& g);

struct RateFit {
    double slope = 0;       // d log x / dt over the trailing window
    double stderr_ = 0;
    double intercept = 0;
    std::size_t points = 0;
    // secondary fit of log x against log(-t), attempted when the
    // exponential rate is flat (algebraic decay, the p = p** signature)
    bool log_power = false;
    double log_slope = 0;
    double log_stderr = 0;
};

// Least-squares rate over the trailing tail_fraction of the time span;
// needs >= 20 positive samples there (InsufficientTail).
RateFit asymptotic_rate(const EFTrajectory& traj, double tail_fraction = 0.25);

} // namespace pucci
