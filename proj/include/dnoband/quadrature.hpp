#pragma once

#include <vector>

namespace dnoband {

struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [a, b].
GaussLegendre gauss_legendre(int n, double a, double b);

} // namespace dnoband
