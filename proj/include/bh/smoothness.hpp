#pragma once

// Differences built from the generalized translation, spherical moduli of
// smoothness and Gagliardo-type seminorms.

#include "bh/core.hpp"
#include "bh/translation.hpp"

#include <span>
#include <vector>

namespace bh {

/// Difference order m in {1, 2, 3}.
struct DifferenceOrder {
    int m = 1;
    explicit DifferenceOrder(int order);
};

/// m-fold f - T^y f. The identity term is the y -> 0 limit of the translation pipeline
/// on the axes where y is nonzero, so differences are O(|y|^2) down to y = 0.
GridFunction difference(const TranslationPlan& plan, const GridFunction& f,
                        std::span<const double> y, DifferenceOrder m);

/// sum_l (-1)^l C(k,l) T^{sqrt(l) y} f, with the same limit for l = 0.
GridFunction tilde_difference(const TranslationPlan& plan, const GridFunction& f,
                              std::span<const double> y, int k);

/// m-fold (I - T^r_sph) f, with I read as the r -> 0 limit of T^r_sph.
GridFunction spherical_difference(const TranslationPlan& plan, const GridFunction& f, double r,
                                  DifferenceOrder m);

/// Half-sphere average of tilde_difference(f, r Theta, k).
GridFunction tilde_spherical_difference(const TranslationPlan& plan, const GridFunction& f,
                                        double r, int k);

/// sum_l (-1)^l C(k,l) j_alpha(sqrt(l) x).
double script_J(double alpha, int k, double x);

struct SmoothnessReport {
    std::vector<double> t_grid;
    std::vector<double> omega_values;
    double p = 2.0;
    WeightVector weight;
    int m = 1;
};

/// Spherical modulus: sup over a 24-point geometric h-grid in [t/100, t], made
/// monotone by carrying the running maximum across the increasing t-grid.
SmoothnessReport modulus(const TranslationPlan& plan, const GridFunction& f, DifferenceOrder m,
                         double p, std::span<const double> t_grid);

/// Integrand nodes of the Gagliardo-type t-integrals (Gauss-Legendre in log t).
struct LogRule {
    std::vector<double> t;
    std::vector<double> weights;  ///< weights for d(log t)
    double t_min = 1e-3;
    double t_max = 1e2;
};

LogRule make_log_rule(double t_min = 1e-3, double t_max = 1e2, std::size_t panels_per_decade = 2,
                      std::size_t nodes_per_panel = 8);

struct SeminormResult {
    double value = 0.0;         ///< seminorm including both analytic tails
    double tail_small = 0.0;    ///< contribution to value^p from (0, t_min)
    double tail_large = 0.0;    ///< contribution to value^p from (t_max, inf)
    double small_t_slope = 2.0; ///< measured log-log slope of the difference norm at t_min
    bool tail_converged = true;
};

/// (int_0^inf (||Delta_sph,t f|| / t^s)^p dt/t)^{1/p}; s in (0,2), p >= 1.
SeminormResult gagliardo_spherical(const TranslationPlan& plan, const GridFunction& f, double s,
                                   double p, const LogRule& rule = make_log_rule());

/// (1/|S|) (int int |f(x) - T^y f(x)|^p |y|^{-sp-n-|a|} y^a x^a dy dx)^{1/p}, with y = r Theta
/// on the sphere rule of the plan.
SeminormResult gagliardo_weighted(const TranslationPlan& plan, const GridFunction& f, double s,
                                  double p, const LogRule& rule = make_log_rule());

/// int_0^inf (omega_sph,1(f,t) / t^s)^p dt/t on the same rule and tails (p-th power).
double besov_integral(const TranslationPlan& plan, const GridFunction& f, double s, double p,
                      const LogRule& rule = make_log_rule());

/// (||f||^p + [f]_sph^p)^{1/p}.
double fractional_sobolev_norm(const TranslationPlan& plan, const GridFunction& f, double s,
                               double p);

}  // namespace bh
