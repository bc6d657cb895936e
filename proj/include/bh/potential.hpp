#pragma once

// Bessel potentials, fractional operators in multiplier and singular-integral form,
// and the potential-space embedding experiment.

#include "bh/core.hpp"
#include "bh/corpus.hpp"
#include "bh/hankel.hpp"
#include "bh/translation.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bh {

struct PotentialRepresentation {
    double nu = 0.0;
    GridFunction g;  ///< density
    GridFunction f;  ///< G_{a,nu} * g
    double p = 2.0;
    double norm = 0.0;  ///< ||g||_{p,a}
};

/// Symbol (1 + |xi|^2)^{-nu/2}.
Multiplier bessel_potential_symbol(double nu);

/// f = G_{a,nu} * g through the multiplier; nu = 0 returns g.
PotentialRepresentation potential_apply(const HankelPlan& plan, double nu, const GridFunction& g,
                                        double p = 2.0);

enum class FracKind { riesz, bessel };
enum class FracForm { multiplier, singular_integral };

struct FracOperatorSpec {
    FracKind kind = FracKind::riesz;
    double s = 1.0;
    FracForm form = FracForm::multiplier;
    std::optional<double> calibration;  ///< constant of the singular form once fitted
};

/// Radial nodes for the shell integrals: geometric panels on [r_min, 1], uniform
/// panels on [1, r_switch]; beyond r_switch every translate vanishes on the grid.
struct ShellQuadrature {
    std::vector<double> r;
    std::vector<double> w;
    double r_min = 1e-4;
    double r_switch = 0.0;
};

ShellQuadrature make_shell_quadrature(const TranslationPlan& plan);

/// Differences base - T^r_sph f on every shell node and at r_min, where base is f
/// read back through the translation pipeline (so the differences are O(r^2) down to r = 0).
struct ShellDifferences {
    ShellQuadrature quad;
    GridFunction f;
    GridFunction base;
    std::vector<GridFunction> diffs;
    GridFunction diff_at_min;
};

ShellDifferences compute_shells(const TranslationPlan& plan, const GridFunction& f);

/// |S| int_0^inf r^{-1-s} rho(r) (f - T^r_sph f) dr without any constant; rho = 1 for
/// riesz and K_mu(r) r^mu with mu = (n+|a|+s)/2 for bessel.
GridFunction singular_integral(const ShellDifferences& shells, FracKind kind, double s);

/// Symbol |xi|^s (riesz) or (1+|xi|^2)^{s/2} (bessel).
Multiplier frac_symbol(FracKind kind, double s);

/// Multiplier form, or calibrated singular form (f + C * integral for bessel).
GridFunction frac_apply(const TranslationPlan& plan, const FracOperatorSpec& spec, const GridFunction& f);

/// Least-squares ratio between the multiplier output (minus f for bessel) and the
/// constant-free singular integral.
double calibrate_constant(const TranslationPlan& plan, const FracOperatorSpec& spec,
                          const GridFunction& reference);

struct InversionResidual {
    double multiplier = 0.0;            ///< max over both orderings, L^2
    double multiplier_orderings = 0.0;  ///< gap between the two multiplier orderings
    double singular = 0.0;              ///< max over both orderings, singular form
};

/// Residuals of (I-Delta)^{s/2}(G_s * phi) = G_s * (I-Delta)^{s/2} phi = phi in L^2.
InversionResidual inversion_check(const TranslationPlan& plan, double s, const GridFunction& phi,
                                  double bessel_calibration);

/// ||(I - Delta_a)^{nu/2} f||_{p,a}.
double potential_norm_estimate(const HankelPlan& plan, const GridFunction& f, double nu, double p);

struct DiscretizationSpec {
    std::vector<double> a{1.0};
    std::size_t M = 128;
    double R = 12.0;
    double Xi = 12.0;
    AxisRule rule = AxisRule::composite;
};

struct EmbeddingRow {
    std::string id;
    double lambda = 1.0;
    double lower = 0.0;   ///< ||f||_{p,a,s-eps}
    double middle = 0.0;  ///< W^{s/2,p} norm
    double upper = 0.0;   ///< ||f||_{p,a,s+eps}
    double ratio_lower = 0.0;  ///< lower / middle
    double ratio_upper = 0.0;  ///< middle / upper
    double sobolev1 = 0.0;     ///< W^{1,p} norm
    double potential2 = 0.0;   ///< ||f||_{p,a,2}
    double ratio_integer = 0.0;  ///< sobolev1 / potential2
};

struct EmbeddingTable {
    double s = 1.0;
    double eps = 0.5;
    double p = 2.0;
    std::vector<EmbeddingRow> rows;
    double constant = 0.0;          ///< max of both embedding ratios
    double integer_constant = 0.0;  ///< max(r, 1/r) of the integer-order ratio
};

/// Dilations 2^{k/2}, k = -4..4.
std::vector<double> dilation_family();

/// Each dilation lambda uses its own grid with cutoffs R / lambda and Xi * lambda.
EmbeddingTable embedding_experiment(const std::vector<CorpusItem>& corpus, double s, double eps,
                                    double p, const DiscretizationSpec& disc,
                                    std::span<const double> dilations);

}  // namespace bh
