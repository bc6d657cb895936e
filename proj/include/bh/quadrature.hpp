#pragma once

#include <cstddef>
#include <vector>

namespace bh::quad {

/// Nodes and weights of a one-dimensional rule.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(std::size_t n);

/// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta,
/// alpha, beta > -1. Computed with the Golub-Welsch eigenvalue method.
Rule gauss_jacobi(std::size_t n, double alpha, double beta);

/// Gauss-Jacobi rule mapped to [0, 1] for the weight u^p (1-u)^q.
Rule gauss_jacobi_unit(std::size_t n, double p, double q);

/// Affine map of a rule on [-1, 1] to [lo, hi].
Rule map_to_interval(const Rule& reference, double lo, double hi);

}  // namespace bh::quad
