#include "pucci/grid.hpp"

#include <cmath>
#include <string>

#include "pucci/errors.hpp"

namespace pucci {

LogGrid::LogGrid(double r_min, double r_max, std::size_t n) {
    if (!(r_min > 0.0) || !(r_min < r_max) || !std::isfinite(r_max))
        fail(ErrorCode::BadInput, "LogGrid needs 0 < r_min < r_max < inf");
    if (n < 5)
        fail(ErrorCode::GridTooSmall, "LogGrid needs at least 5 nodes, got " +
                                      std::to_string(n));
    const double s0 = std::log(r_min);
    h_ = (std::log(r_max) - s0) / double(n - 1);
    r_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        r_[i] = std::exp(s0 + double(i) * h_);
    r_.front() = r_min;
    r_.back() = r_max;
}

LogGrid LogGrid::dyadic(int octaves, int nodes_per_octave) {
    if (octaves < 1 || nodes_per_octave < 1)
        fail(ErrorCode::BadInput, "dyadic grid needs octaves, nodes_per_octave >= 1");
    const long total = long(octaves) * nodes_per_octave;
    if (total + 1 < 5)
        fail(ErrorCode::GridTooSmall, "dyadic grid below 5 nodes");
    LogGrid g;
    g.h_ = std::log(2.0) / nodes_per_octave;
    g.r_.resize(std::size_t(total) + 1);
    // exp2 puts every whole octave exactly on a power of two
    for (long i = 0; i <= total; ++i)
        g.r_[std::size_t(i)] = std::exp2(double(i - total) / nodes_per_octave);
    return g;
}

LogGrid LogGrid::from_nodes(std::vector<double> r) {
    if (r.size() < 5)
        fail(ErrorCode::GridTooSmall, "LogGrid needs at least 5 nodes, got " +
                                      std::to_string(r.size()));
    for (double x : r)
        if (!(x > 0.0) || !std::isfinite(x))
            fail(ErrorCode::BadInput, "LogGrid nodes must be positive and finite");
    const double h = std::log(r.back() / r.front()) / double(r.size() - 1);
    if (!(h > 0.0))
        fail(ErrorCode::BadInput, "LogGrid nodes must ascend");
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double hi = std::log(r[i + 1] / r[i]);
        if (std::abs(hi - h) > 1e-9 * h)
            fail(ErrorCode::BadInput,
                 "LogGrid nodes must be log-uniform; step " + std::to_string(i) +
                     " deviates by " + std::to_string(std::abs(hi - h) / h) +
                     " relative");
    }
    LogGrid g;
    g.h_ = h;
    g.r_ = std::move(r);
    return g;
}

namespace {

// d/ds stencils, denominators 12h; rows: i = 0, 1, interior, n-2, n-1
const double D1_L0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
const double D1_L1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};
const double D1_C[5]  = {1.0, -8.0, 0.0, 8.0, -1.0};
// d^2/ds^2 stencils, denominators 12h^2
const double D2_L0[5] = {35.0, -104.0, 114.0, -56.0, 11.0};
const double D2_L1[5] = {11.0, -20.0, 6.0, 4.0, -1.0};
const double D2_C[5]  = {-1.0, 16.0, -30.0, 16.0, -1.0};

// every row sums to zero, so anchoring on one node makes constant input
// vanish exactly instead of leaving rounding residue
double dot5(const double c[5], const double* v, int anchor) {
    double acc = 0.0;
    for (int k = 0; k < 5; ++k)
        if (k != anchor) acc += c[k] * (v[k] - v[anchor]);
    return acc;
}

} // namespace

void fd_derivatives(const LogGrid& g, const std::vector<double>& values,
                    std::vector<double>& du, std::vector<double>& ddu) {
    const std::size_t n = g.size();
    if (values.size() != n)
        fail(ErrorCode::BadInput, "fd_derivatives: value/grid size mismatch");
    if (n < 5)
        fail(ErrorCode::GridTooSmall, "fd_derivatives needs at least 5 nodes");

    const double h = g.log_step();
    const double w1 = 1.0 / (12.0 * h), w2 = 1.0 / (12.0 * h * h);
    du.resize(n);
    ddu.resize(n);

    auto emit = [&](std::size_t i, double vs, double vss) {
        const double r = g[i];
        du[i] = vs / r;
        ddu[i] = (vss - vs) / (r * r);
    };

    const double* v = values.data();
    emit(0, w1 * dot5(D1_L0, v, 0), w2 * dot5(D2_L0, v, 0));
    emit(1, w1 * dot5(D1_L1, v, 1), w2 * dot5(D2_L1, v, 1));
    for (std::size_t i = 2; i + 2 < n; ++i)
        emit(i, w1 * dot5(D1_C, v + i - 2, 2), w2 * dot5(D2_C, v + i - 2, 2));

    // mirrored one-sided rows: odd derivative flips sign, even keeps it
    const double* t = values.data() + (n - 5);
    double m1[5], m2[5], e1[5], e2[5];
    for (int k = 0; k < 5; ++k) {
        m1[k] = -D1_L1[4 - k];
        m2[k] = D2_L1[4 - k];
        e1[k] = -D1_L0[4 - k];
        e2[k] = D2_L0[4 - k];
    }
    emit(n - 2, w1 * dot5(m1, t, 3), w2 * dot5(m2, t, 3));
    emit(n - 1, w1 * dot5(e1, t, 4), w2 * dot5(e2, t, 4));
}

RadialFunction RadialFunction::from_samples(const LogGrid& g, std::vector<double> values) {
    RadialFunction out{g, std::move(values), {}, {}, DerivativeProvenance::FiniteDifference};
    fd_derivatives(out.grid, out.u, out.du, out.ddu);
    return out;
}

RadialFunction RadialFunction::head(std::size_t n) const {
    if (n > size())
        fail(ErrorCode::BadInput, "head beyond sample count");
    std::vector<double> r(grid.nodes().begin(), grid.nodes().begin() + long(n));
    return RadialFunction{LogGrid::from_nodes(std::move(r)),
                          {u.begin(), u.begin() + long(n)},
                          {du.begin(), du.begin() + long(n)},
                          {ddu.begin(), ddu.begin() + long(n)},
                          provenance};
}

} // namespace pucci
