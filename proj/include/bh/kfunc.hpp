#pragma once

// Bessel-Sobolev norms, the smoothing operator P_nu, best-approximation bounds,
// the K-functional upper bound and the K ~ omega comparison.

#include "bh/core.hpp"
#include "bh/hankel.hpp"
#include "bh/translation.hpp"

#include <span>
#include <string>
#include <vector>

namespace bh {

enum class LaplacianMode { spectral, stencil };

/// Delta_a f = sum_i B_{alpha_i} f. Spectral mode applies -|xi|^2; stencil mode uses
/// 5-point finite-difference weights with even reflection at x_i = 0 (needs >= 16 nodes per axis).
GridFunction bessel_laplacian(const HankelPlan& plan, const GridFunction& f,
                              LaplacianMode mode = LaplacianMode::spectral);

/// Delta_a^m f through the multiplier (-|xi|^2)^m.
GridFunction bessel_laplacian_power(const HankelPlan& plan, const GridFunction& f, int m);

struct SobolevNorm {
    int m = 0;
    double p = 2.0;
    std::vector<double> components;  ///< ||Delta_a^k f||_{p,a}, k = 0..m
    double total = 0.0;
};

/// (sum_k ||Delta_a^k f||^p)^{1/p}, m <= 2.
SobolevNorm sobolev_norm(const HankelPlan& plan, const GridFunction& f, int m, double p);

/// Smooth radial cutoff: 1 on [0, 1], 0 on [2, inf), C^infinity in between.
double eta_cutoff(double u);

SpectralFunction smooth_Pnu_spectrum(const HankelPlan& plan, const GridFunction& f, double nu);

/// P_nu f = H^{-1}(eta(|xi|/nu) H f).
GridFunction smooth_Pnu(const HankelPlan& plan, const GridFunction& f, double nu);

/// Upper bound ||f - P_nu f||_{p,a} for the best approximation E_nu(f).
double best_approx_E(const HankelPlan& plan, const GridFunction& f, double nu, double p);

struct KFunctionalResult {
    double value = 0.0;  ///< upper bound for K(f, tau)
    double nu = 0.0;     ///< minimizing nu; 0 when the candidate g = 0 wins
};

/// Minimum of ||f - P_nu f|| + tau ||Delta^m P_nu f|| over nu = 2^{(k-6)/3} / t,
/// k = 0..15, with t = tau^{1/(2m)}, together with the candidate g = 0.
KFunctionalResult k_functional(const HankelPlan& plan, const GridFunction& f, double tau, int m,
                               double p);

struct EquivalenceRow {
    std::string id;
    double t = 0.0;
    double k_upper = 0.0;
    double omega = 0.0;
    double ratio = 0.0;
};

struct EquivalenceTable {
    std::vector<EquivalenceRow> rows;
    std::vector<std::string> excluded;  ///< functions dropped because they vanish
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    /// Smallest C with every ratio in [1/C, C].
    double constant = 0.0;
};

/// Compares the K-functional at tau = t^{2m} with the spherical modulus at t.
EquivalenceTable equivalence_experiment(const TranslationPlan& plan,
                                        const std::vector<NamedFunction>& corpus, int m, double p,
                                        std::span<const double> t_grid);

/// Least-squares slope of log y against log x over the pairs with y > floor.
double loglog_slope(std::span<const double> x, std::span<const double> y, double floor = 0.0);

}  // namespace bh
