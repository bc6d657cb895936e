#include "bh/potential.hpp"

#include "bh/kfunc.hpp"
#include "bh/parallel.hpp"
#include "bh/quadrature.hpp"
#include "bh/smoothness.hpp"
#include "bh/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bh {

namespace {

constexpr std::size_t kShellNodes = 8;
constexpr double kBesselTailSpan = 80.0;

void check_singular_order(double s) {
    if (!(s > 0.0 && s < 2.0)) throw std::invalid_argument("singular form requires 0 < s < 2");
}

double l2_distance(const GridFunction& f, const GridFunction& g) { return lp_norm(f - g, 2.0); }

// int_{lo}^{lo + span} r^{-1-s} K_mu(r) r^mu dr.
double bessel_weight_tail(const WeightVector& w, double s, double lo) {
    const quad::Rule ref = quad::gauss_legendre(kShellNodes);
    double sum = 0.0;
    for (double a = lo; a < lo + kBesselTailSpan; a += 2.0) {
        const quad::Rule q = quad::map_to_interval(ref, a, a + 2.0);
        for (std::size_t k = 0; k < q.size(); ++k) {
            sum += q.weights[k] * std::pow(q.nodes[k], -1.0 - s) * eval_omega_weight(w, -s, q.nodes[k]);
        }
    }
    return sum;
}

}  // namespace

Multiplier bessel_potential_symbol(double nu) {
    return Multiplier::radial([nu](double r) { return std::pow(1.0 + r * r, -0.5 * nu); },
                              "(1+|xi|^2)^(-nu/2)");
}

PotentialRepresentation potential_apply(const HankelPlan& plan, double nu, const GridFunction& g,
                                        double p) {
    if (!(nu >= 0.0)) throw std::invalid_argument("potential_apply: nu must be >= 0");
    GridFunction f = nu == 0.0 ? g : apply_symbol(plan, g, bessel_potential_symbol(nu));
    const double norm = lp_norm(g, p);
    return PotentialRepresentation{nu, g, std::move(f), p, norm};
}

ShellQuadrature make_shell_quadrature(const TranslationPlan& plan) {
    const Grid& grid = *plan.hankel().space();
    double R = 0.0;
    for (std::size_t i = 0; i < grid.dim(); ++i) R = std::max(R, grid.axis(i).cutoff);
    ShellQuadrature q;
    q.r_switch = std::max(2.0, 2.0 * R * std::sqrt(static_cast<double>(grid.dim())));
    const quad::Rule ref = quad::gauss_legendre(kShellNodes);
    const auto add_panel = [&](double lo, double hi) {
        const quad::Rule m = quad::map_to_interval(ref, lo, hi);
        q.r.insert(q.r.end(), m.nodes.begin(), m.nodes.end());
        q.w.insert(q.w.end(), m.weights.begin(), m.weights.end());
    };
    for (int k = 0; k < 8; ++k) add_panel(q.r_min * std::pow(10.0, 0.5 * k), q.r_min * std::pow(10.0, 0.5 * (k + 1)));
    const auto uniform = static_cast<int>(std::ceil(q.r_switch - 1.0));
    const double width = (q.r_switch - 1.0) / uniform;
    for (int k = 0; k < uniform; ++k) add_panel(1.0 + width * k, 1.0 + width * (k + 1));
    return q;
}

ShellDifferences compute_shells(const TranslationPlan& plan, const GridFunction& f) {
    ShellQuadrature q = make_shell_quadrature(plan);
    std::vector<double> radii = q.r;
    radii.push_back(q.r_min);
    const GridFunction base = reconstruct(plan, f);
    std::vector<std::vector<double>> diffs(radii.size());
    parallel_for(radii.size(), [&](std::size_t k) {
        diffs[k] = (base - spherical_translate(plan, f, radii[k])).values();
    });
    std::vector<GridFunction> out;
    out.reserve(q.r.size());
    for (std::size_t k = 0; k < q.r.size(); ++k) out.emplace_back(f.grid_ptr(), std::move(diffs[k]));
    GridFunction at_min(f.grid_ptr(), std::move(diffs.back()));
    return ShellDifferences{std::move(q), f, base, std::move(out), std::move(at_min)};
}

GridFunction singular_integral(const ShellDifferences& shells, FracKind kind, double s) {
    check_singular_order(s);
    const WeightVector& w = shells.f.grid().weight();
    const auto rho = [&](double r) { return kind == FracKind::riesz ? 1.0 : eval_omega_weight(w, -s, r); };
    const ShellQuadrature& q = shells.quad;
    std::vector<double> sum(shells.f.size(), 0.0);
    for (std::size_t k = 0; k < q.r.size(); ++k) {
        const double c = q.w[k] * std::pow(q.r[k], -1.0 - s) * rho(q.r[k]);
        const auto& d = shells.diffs[k].values();
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += c * d[i];
    }
    // Below r_min the difference grows like r^2.
    const double small = rho(q.r_min) * std::pow(q.r_min, -s) / (2.0 - s);
    // Beyond r_switch the translate vanishes and the difference is f itself.
    const double large = kind == FracKind::riesz ? std::pow(q.r_switch, -s) / s
                                                 : bessel_weight_tail(w, s, q.r_switch);
    const auto& dmin = shells.diff_at_min.values();
    const auto& f = shells.base.values();
    const double surface = w.sphere_measure();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = surface * (sum[i] + small * dmin[i] + large * f[i]);
    return GridFunction(shells.f.grid_ptr(), std::move(sum));
}

Multiplier frac_symbol(FracKind kind, double s) {
    if (kind == FracKind::riesz) return Multiplier::radial([s](double r) { return std::pow(r, s); }, "|xi|^s");
    return Multiplier::radial([s](double r) { return std::pow(1.0 + r * r, 0.5 * s); }, "(1+|xi|^2)^(s/2)");
}

GridFunction frac_apply(const TranslationPlan& plan, const FracOperatorSpec& spec, const GridFunction& f) {
    if (spec.form == FracForm::multiplier) {
        if (!(spec.s > 0.0 && spec.s <= 2.0)) throw std::invalid_argument("frac_apply: s must lie in (0, 2]");
        return apply_symbol(plan.hankel(), f, frac_symbol(spec.kind, spec.s));
    }
    check_singular_order(spec.s);
    if (!spec.calibration || !(*spec.calibration > 0.0)) {
        throw std::invalid_argument("frac_apply: singular form needs a positive calibration constant");
    }
    GridFunction out = *spec.calibration * singular_integral(compute_shells(plan, f), spec.kind, spec.s);
    if (spec.kind == FracKind::bessel) out += f;
    return out;
}

double calibrate_constant(const TranslationPlan& plan, const FracOperatorSpec& spec,
                          const GridFunction& reference) {
    check_singular_order(spec.s);
    const GridFunction raw = singular_integral(compute_shells(plan, reference), spec.kind, spec.s);
    GridFunction target = apply_symbol(plan.hankel(), reference, frac_symbol(spec.kind, spec.s));
    if (spec.kind == FracKind::bessel) target -= reference;
    const double rr = inner_product(raw, raw);
    const double ref_norm = lp_norm(reference, 2.0);
    if (!(std::sqrt(rr) > 1e-12 * ref_norm) || ref_norm == 0.0) {
        throw std::invalid_argument("calibrate_constant: degenerate reference");
    }
    const double c = inner_product(raw, target) / rr;
    if (!(c > 0.0)) throw std::runtime_error("calibrate_constant: fitted constant is not positive");
    return c;
}

InversionResidual inversion_check(const TranslationPlan& plan, double s, const GridFunction& phi,
                                  double bessel_calibration) {
    const HankelPlan& hp = plan.hankel();
    const Multiplier up = frac_symbol(FracKind::bessel, s);
    const Multiplier down = bessel_potential_symbol(s);
    // Multiplier route: both orderings composed on the spectrum of phi.
    const SpectralFunction F = hankel_forward(hp, phi);
    const GridFunction a = hankel_inverse(hp, apply_multiplier(apply_multiplier(F, down), up));
    const GridFunction b = hankel_inverse(hp, apply_multiplier(apply_multiplier(F, up), down));
    InversionResidual r;
    r.multiplier = std::max(l2_distance(a, phi), l2_distance(b, phi));
    r.multiplier_orderings = l2_distance(a, b);

    const GridFunction u = potential_apply(hp, s, phi).f;
    FracOperatorSpec sing{FracKind::bessel, s, FracForm::singular_integral, bessel_calibration};
    const GridFunction as = frac_apply(plan, sing, u);
    const GridFunction bs = potential_apply(hp, s, frac_apply(plan, sing, phi)).f;
    r.singular = std::max(l2_distance(as, phi), l2_distance(bs, phi));
    return r;
}

double potential_norm_estimate(const HankelPlan& plan, const GridFunction& f, double nu, double p) {
    if (!(nu >= 0.0)) throw std::invalid_argument("potential_norm_estimate: nu must be >= 0");
    if (nu == 0.0) return lp_norm(f, p);
    return lp_norm(apply_symbol(plan, f, frac_symbol(FracKind::bessel, nu)), p);
}

std::vector<double> dilation_family() {
    std::vector<double> out;
    for (int k = -4; k <= 4; ++k) out.push_back(std::exp2(0.5 * k));
    return out;
}

EmbeddingTable embedding_experiment(const std::vector<CorpusItem>& corpus, double s, double eps,
                                    double p, const DiscretizationSpec& disc,
                                    std::span<const double> dilations) {
    if (!(eps > 0.0 && eps < s && s < 2.0)) throw std::invalid_argument("embedding requires 0 < eps < s < 2");
    if (corpus.empty()) throw std::invalid_argument("embedding_experiment: empty corpus");
    const WeightVector weight(disc.a);
    std::vector<TranslationPlanPtr> plans;
    for (double lambda : dilations) {
        if (!(lambda > 0.0)) throw std::invalid_argument("embedding_experiment: dilations must be positive");
        plans.push_back(make_translation_plan(
            make_hankel_plan(weight, disc.M, disc.R / lambda, disc.Xi * lambda, disc.rule)));
    }
    const std::size_t cells = dilations.size() * corpus.size();
    std::vector<EmbeddingRow> rows(cells);
    parallel_for(cells, [&](std::size_t idx) {
        const std::size_t li = idx / corpus.size();
        const std::size_t ci = idx % corpus.size();
        const TranslationPlan& tp = *plans[li];
        const HankelPlan& hp = tp.hankel();
        const GridFunction f = realize(corpus[ci], hp, dilations[li]);
        EmbeddingRow row;
        row.id = corpus[ci].id;
        row.lambda = dilations[li];
        row.lower = potential_norm_estimate(hp, f, s - eps, p);
        row.middle = fractional_sobolev_norm(tp, f, s, p);
        row.upper = potential_norm_estimate(hp, f, s + eps, p);
        row.ratio_lower = row.lower / row.middle;
        row.ratio_upper = row.middle / row.upper;
        row.sobolev1 = sobolev_norm(hp, f, 1, p).total;
        row.potential2 = potential_norm_estimate(hp, f, 2.0, p);
        row.ratio_integer = row.sobolev1 / row.potential2;
        rows[idx] = row;
    });
    EmbeddingTable table{s, eps, p, std::move(rows), 0.0, 0.0};
    for (const auto& r : table.rows) {
        table.constant = std::max({table.constant, r.ratio_lower, r.ratio_upper});
        table.integer_constant = std::max({table.integer_constant, r.ratio_integer, 1.0 / r.ratio_integer});
    }
    return table;
}

}  // namespace bh
