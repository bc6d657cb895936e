#pragma once

// Discrete Bessel capacities: the primal density problem, the dual measure problem,
// neighbourhood capacities and the removability experiment.

#include "bh/core.hpp"
#include "bh/hankel.hpp"
#include "bh/tensor.hpp"

#include <string>
#include <vector>

namespace bh {

/// Finite discretization of a compact set K in the open orthant.
struct CompactSet {
    std::vector<std::vector<double>> points;
    std::string label;

    bool empty() const { return points.empty(); }
};

struct AtomicMeasure {
    std::vector<std::vector<double>> points;
    std::vector<double> masses;

    double total() const;
};

struct SolverOptions {
    std::size_t max_iterations = 5000;
    double tolerance = 1e-6;       ///< early stop on the relative duality gap
    double accept_gap = 1e-3;      ///< relative gap below which a capped run counts as converged
};

struct CapacityResult {
    double primal_value = 0.0;       ///< ||g||_p^p of a feasible density
    double dual_value = 0.0;         ///< mu(K) of a normalized measure
    std::vector<double> density;     ///< g on the grid nodes
    AtomicMeasure measure;
    std::size_t iterations = 0;
    double min_slack = 0.0;          ///< min_j (G*g)(x_j) - 1 (>= 0 for the rescaled density)
    double gap = 0.0;                ///< relative gap between primal^{1/p} and dual
    bool converged = true;
};

/// Rows: (G_{a,s} * g)(x_j) as a linear map of the grid values g, through the band-limited
/// kernel on the plan's frequency grid.
tensor::Matrix capacity_kernel(const HankelPlan& plan, const CompactSet& K, double s);

/// Validates K against the plan's domain and the exponents.
void check_capacity_problem(const HankelPlan& plan, const CompactSet& K, double p, double s);

/// inf ||g||^p_{p,a} over g >= 0 with (G_s * g)(x_j) >= 1. Solved through the concave
/// Lagrangian dual by accelerated projected gradient ascent; the primal density is
/// recovered and rescaled to be feasible. The dual measure comes from the multipliers.
CapacityResult capacity_primal(const HankelPlan& plan, const CompactSet& K, double p, double s,
                               const SolverOptions& options = {});

/// sup mu(K) over atomic mu >= 0 on K with ||(G_s * mu)_+||_{p',a} <= 1, solved as
/// minimization of the constraint norm on the simplex (projection threshold by bisection).
CapacityResult capacity_dual(const HankelPlan& plan, const CompactSet& K, double p, double s,
                             const SolverOptions& options = {});

/// Closed-form value for one point and p = 2: 1 / sum_k q_k K_+(x_0, y_k)^2.
double single_point_capacity_p2(const HankelPlan& plan, const std::vector<double>& x0, double s);

/// Lattice of spacing 0.025 inside the radius-rho balls around K (points kept inside the grid).
CompactSet neighbourhood(const CompactSet& K, double rho, const HankelPlan& plan);

struct NeighbourhoodCapacity {
    double rho = 0.0;
    std::size_t points = 0;
    CapacityResult result;
};

/// Capacities of the neighbourhoods for each rho (upper bounds for the capacity of K).
std::vector<NeighbourhoodCapacity> capacity_N(const HankelPlan& plan, const CompactSet& K, double p,
                                              double s, const std::vector<double>& rhos,
                                              const SolverOptions& options = {});

struct RemovabilityConfig {
    CompactSet K;
    double p = 2.0;         ///< L^p_a exponent; capacities use p' = p/(p-1)
    double s = 1.5;
    std::vector<double> s_list{1.0};
    std::vector<double> a_list{1.0};
    std::vector<double> scales{1.0, 0.5, 0.25, 0.125};  ///< shrink factors about the centroid
    std::size_t refinements = 2;                          ///< midpoint refinements of the base set
    double neighbourhood_radius = 0.2;
};

struct RemovabilityRow {
    std::string label;
    double scale = 1.0;
    std::size_t refinement = 0;
    std::size_t points = 0;
    double capacity = 0.0;
    double dual = 0.0;
    double gap = 0.0;
    bool weak_duality = true;
    bool converged = true;
};

struct RemovabilityReport {
    std::vector<RemovabilityRow> rows;
    double trend_ratio = 0.0;           ///< smallest / largest capacity over the shrinking family
    double single_point_capacity = 0.0; ///< closed form at the centroid when p' = 2
    double concentration = 0.0;         ///< L^2 share of (I-Delta)^{s/2} u near K, u = G_s * mu
    double operator_concentration = 0.0;  ///< same share for L u
    double sp_prime = 0.0;              ///< s p' compared with n + |a|
};

/// Midpoint refinement along the point order.
CompactSet refine(const CompactSet& K);

/// Requires 2 > s > max s_k.
RemovabilityReport removability_experiment(const HankelPlan& plan, const RemovabilityConfig& config,
                                           const SolverOptions& options = {});

}  // namespace bh
