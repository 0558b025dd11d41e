#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pucci/constants.hpp"
#include "pucci/grid.hpp"

namespace pucci {

// Closed-form comparison functions.  Power* / TauPlus* / TauMinus* / Log* /
// KShift* / EpsSuper / LogHalfSuper act on the main equation; VLog* act on
// the transformed v-equation.
enum class BarrierKind {
    PowerSuper,
    PowerK,
    TauPlusSub,
    TauPlusSubGeneral,
    TauMinusSub,
    LogSub,
    LogSuper,
    KShiftSub,
    KShiftSuper,
    EpsSuper,
    LogHalfSuper,
    VLogSub,
    VLogSuper,
};

enum class BarrierDirection { Sub, Super };
enum class BarrierTarget { MainEquation, VEquation };

std::string_view to_string(BarrierKind k);
BarrierKind barrier_kind_from_string(std::string_view name);   // BadInput

// Free parameters; every kind documents which fields it reads and fills
// the rest with its defaults (delta at half its admissible bound, the
// amplitude at equality of its bound, r0 by bisection).
struct BarrierParams {
    std::optional<double> c;       // amplitude (Power*) or log shift (LogSub/LogSuper)
    std::optional<double> gamma;   // decay exponent (PowerSuper, KShift*)
    std::optional<double> delta;   // correction exponent
    std::optional<double> eps;     // small amplitude / log regularizer
    std::optional<double> a;       // amplitude (TauPlusSubGeneral, KShift*, LogSub, VLogSub)
    std::optional<double> b;       // amplitude (LogSuper, VLogSuper)
    std::optional<double> k1;      // sub amplitude below K (KShiftSub)
    std::optional<double> k2;      // super amplitude above K (KShiftSuper)
    std::optional<double> cap;     // amplitude C (EpsSuper companion, LogHalfSuper)
    std::optional<double> c1;      // v-equation log shift, sub side
    std::optional<double> c2;      // v-equation log shift, super side
    std::optional<double> r0;      // validity radius
};

// One construction inequality with its margin (>= 0 when satisfied;
// strict entries additionally need margin > 0).
struct ConstraintEntry {
    std::string name;
    double margin = 0;
    bool strict = false;
};

class Barrier {
public:
    BarrierKind kind() const noexcept { return kind_; }
    BarrierDirection direction() const noexcept { return dir_; }
    BarrierTarget target() const noexcept { return target_; }
    double validity_radius() const noexcept { return r0_; }
    const ConstantSet& constants() const noexcept { return cs_; }
    const BarrierParams& params() const noexcept { return bp_; }
    const std::vector<ConstraintEntry>& certificate() const noexcept { return cert_; }

    // closed-form value and first two derivatives; OutOfValidity when
    // r <= 0 or r exceeds validity_radius (up to rounding slack)
    void eval(double r, double& u, double& du, double& ddu) const;
    RadialFunction sample(const LogGrid& g) const;

    // bypasses every constraint check; for negative tests and experiments
    static Barrier unchecked(BarrierKind k, BarrierDirection dir,
                             const ConstantSet& cs, const BarrierParams& bp);

private:
    friend Barrier make_barrier(BarrierKind, const ConstantSet&, const BarrierParams&,
                                std::optional<BarrierDirection>);
    Barrier() = default;

    BarrierKind kind_{};
    BarrierDirection dir_{};
    BarrierTarget target_{};
    ConstantSet cs_;
    BarrierParams bp_;
    double r0_ = 1.0;
    std::vector<ConstraintEntry> cert_;
};

// Validating factory.  Regime prerequisites raise RegimeMismatch, violated
// inequalities raise ConstraintViolation naming the first failed entry.
// dir is only consulted for PowerK (both directions are meaningful there).
Barrier make_barrier(BarrierKind kind, const ConstantSet& cs,
                     const BarrierParams& bp = {},
                     std::optional<BarrierDirection> dir = {});

// Defaults that make_barrier would fill in, exposed for inspection.
BarrierParams default_barrier_params(BarrierKind kind, const ConstantSet& cs);

// Largest r0 in (0, 1] keeping the kind's constraint chain satisfiable with
// the remaining parameters fixed (bisection on log r0).
double largest_valid_r0(BarrierKind kind, const ConstantSet& cs, BarrierParams bp);

struct SignCertificate {
    bool holds = false;
    std::size_t violations = 0;
    std::size_t worst_node = 0;
    double worst_r = 0;
    double worst_margin = 0;   // min over nodes of signed residual / scale
    double tol = 0;
};

// Residual sign of the barrier's target equation over g: Sub requires
// residual >= -tol*scale at every node, Super requires residual <= tol*scale.
// try_certify_sign reports; certify_sign throws CertificationFailure when
// any node violates.
SignCertificate try_certify_sign(const Barrier& b, const LogGrid& g, double tol = 1e-12);
SignCertificate certify_sign(const Barrier& b, const LogGrid& g, double tol = 1e-12);

// sub(r) <= super(r)*(1 + tol) at every node of g
bool pairing_holds(const Barrier& sub, const Barrier& super, const LogGrid& g,
                   double tol = 1e-12);

} // namespace pucci
