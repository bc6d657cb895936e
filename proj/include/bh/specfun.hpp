#pragma once

// Special functions of the weighted geometry: the normalized Bessel function j_alpha,
// the Macdonald function K_nu and the kernels built from them.

#include "bh/core.hpp"

#include <span>

namespace bh {

/// Order of a normalized Bessel function; evaluation needs alpha >= -1/2.
struct BesselOrder {
    double alpha = 0.0;
};

/// Bessel kernel G_{a,nu}; nu > 0 keeps it integrable.
struct KernelSpec {
    WeightVector weight;
    double nu = 1.0;
};

/// j_alpha(z) = Gamma(alpha+1) (2/z)^alpha J_alpha(z), with j_alpha(0) = 1.
double eval_j(BesselOrder order, double z);
inline double eval_j(double alpha, double z) { return eval_j(BesselOrder{alpha}, z); }

/// Raw power series of j_alpha truncated after `terms` terms.
double j_series(double alpha, double z, int terms);

/// j_alpha'(z) = -z j_{alpha+1}(z) / (2(alpha+1)).
double eval_j_deriv(BesselOrder order, double z);
inline double eval_j_deriv(double alpha, double z) { return eval_j_deriv(BesselOrder{alpha}, z); }

/// Modified Bessel function of the second kind, nu >= 0, r > 0.
double eval_K(double nu, double r);

/// Product kernel prod_i j_{alpha_i}(x_i xi_i).
double eval_jj(const WeightVector& weight, std::span<const double> x, std::span<const double> xi);

/// Normalizing constant of G_{a,nu}.
double kernel_constant(const KernelSpec& spec);

/// Radial profile of the Bessel kernel G_{a,nu} at r > 0.
double eval_G(const KernelSpec& spec, double r);

/// omega_{a,nu}(r) = c K_{(n+|a|-nu)/2}(r) r^{(n+|a|-nu)/2}; nu may be negative.
double eval_omega_weight(const WeightVector& weight, double nu, double r, double constant = 1.0);

}  // namespace bh
