#pragma once

#include <cstddef>
#include <vector>

namespace pucci {

// Geometric grid r_i = r_min e^{ih}, h = log(r_max/r_min)/(n-1).
// Consecutive ratios are constant to a few ulp; all derivative stencils
// act on the uniform variable s = log r.
class LogGrid {
public:
    LogGrid(double r_min, double r_max, std::size_t n);

    // [2^-octaves, 1] with nodes_per_octave intervals per octave, so every
    // radius 2^-k (0 <= k <= octaves) lands exactly on a node
    static LogGrid dyadic(int octaves, int nodes_per_octave);

    // Adopts explicitly listed nodes (ascending, positive); the log step
    // must be uniform to ~1e-9 relative because every stencil assumes
    // uniformity in s = log r.
    static LogGrid from_nodes(std::vector<double> r);

    std::size_t size() const noexcept { return r_.size(); }
    double operator[](std::size_t i) const noexcept { return r_[i]; }
    const std::vector<double>& nodes() const noexcept { return r_; }
    double r_min() const noexcept { return r_.front(); }
    double r_max() const noexcept { return r_.back(); }
    double log_step() const noexcept { return h_; }

    bool operator==(const LogGrid& o) const noexcept { return r_ == o.r_; }

private:
    LogGrid() = default;
    std::vector<double> r_;
    double h_ = 0;
};

enum class DerivativeProvenance { Analytic, FiniteDifference, Transform };

// d/ds and d^2/ds^2 by 5-point stencils (one-sided at the edges), mapped
// back through du = v_s / r, ddu = (v_ss - v_s) / r^2.  Fourth order in
// the interior, at least third at the edges.  GridTooSmall below 5 nodes.
void fd_derivatives(const LogGrid& g, const std::vector<double>& values,
                    std::vector<double>& du, std::vector<double>& ddu);

// Radial samples carrying both derivatives.  Positivity is not enforced
// here; operators needing u > 0 check at their call sites.
struct RadialFunction {
    LogGrid grid;
    std::vector<double> u, du, ddu;
    DerivativeProvenance provenance = DerivativeProvenance::Analytic;

    std::size_t size() const noexcept { return u.size(); }

    template <class F>   // F(r, u&, du&, ddu&)
    static RadialFunction analytic(const LogGrid& g, F&& f) {
        RadialFunction out{g, {}, {}, {}, DerivativeProvenance::Analytic};
        const std::size_t n = g.size();
        out.u.resize(n);
        out.du.resize(n);
        out.ddu.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            f(g[i], out.u[i], out.du[i], out.ddu[i]);
        return out;
    }

    static RadialFunction from_samples(const LogGrid& g, std::vector<double> values);

    // First n nodes with their derivative samples; drops boundary artifacts
    // (e.g. a homogeneous Dirichlet zero) before classification.
    RadialFunction head(std::size_t n) const;
};

} // namespace pucci
