#pragma once

#include <limits>

namespace pucci {

// Which extremal operator a radial evaluation refers to.
enum class PucciSign { Plus, Minus };

// Ellipticity pair 0 < lambda <= Lambda, dimension N >= 2, Hardy weight mu
// and absorption exponent p.  p may be left NaN when only the p-independent
// constants are required.
struct ProblemParams {
    double lambda = 1.0;
    double Lambda = 1.0;
    int N = 3;
    double mu = 0.0;
    double p = std::numeric_limits<double>::quiet_NaN();

    bool has_p() const noexcept { return p == p; }
};

// Throws InvalidEllipticity unless 0 < lambda <= Lambda (finite) and N >= 2.
void validate(const ProblemParams& prm);

} // namespace pucci
