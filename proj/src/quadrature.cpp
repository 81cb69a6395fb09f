#include "dnoband/quadrature.hpp"

#include "dnoband/errors.hpp"

#include <gsl/gsl_integration.h>

#include <string>

namespace dnoband {

GaussLegendre gauss_legendre(int n, double a, double b) {
    if (n < 1) throw PreconditionError("gauss_legendre: n must be >= 1, got " + std::to_string(n));
    gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
    if (t == nullptr) throw Error("gauss_legendre: table allocation failed");
    GaussLegendre g;
    g.nodes.resize(static_cast<std::size_t>(n));
    g.weights.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        gsl_integration_glfixed_point(a, b, i, &g.nodes[i], &g.weights[i], t);
    gsl_integration_glfixed_table_free(t);
    return g;
}

} // namespace dnoband
