#include "bh/smoothness.hpp"

#include "bh/parallel.hpp"
#include "bh/quadrature.hpp"
#include "bh/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bh {

namespace {

constexpr std::size_t kSubgrid = 24;
constexpr double kSubgridSpan = 100.0;

double binomial(int k, int l) {
    double c = 1.0;
    for (int i = 1; i <= l; ++i) c = c * (k - l + i) / i;
    return c;
}

void check_exponent(double s, double p, const char* what) {
    if (!(s > 0.0 && s < 2.0)) throw std::invalid_argument(std::string(what) + ": s must lie in (0, 2)");
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument(std::string(what) + ": p must be finite and >= 1");
}

// Tails of int (D(t) t^{-s})^p dt/t, with D(t) ~ t^2 below t_min and D constant above t_max.
void add_tails(SeminormResult& r, double pow_small, double pow_large, double s, double p,
               const LogRule& rule) {
    r.tail_small = pow_small * std::pow(rule.t_min, -s * p) / ((2.0 - s) * p);
    r.tail_large = pow_large * std::pow(rule.t_max, -s * p) / (s * p);
}

// Limit of T^y g as y -> 0 along the nonzero components of y: the reconstruction
// pipeline on those axes. Differences against it vanish to second order.
GridFunction base_for(const TranslationPlan& plan, const GridFunction& g, std::span<const double> y) {
    std::vector<double> values = g.values();
    const auto& shape = g.grid().shape();
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] > 0.0) values = tensor::apply_along_axis(values, shape, i, plan.reconstruction_matrix(i));
    }
    return GridFunction(g.grid_ptr(), std::move(values), g.symmetry());
}

}  // namespace

DifferenceOrder::DifferenceOrder(int order) : m(order) {
    if (order < 1 || order > 3) throw std::invalid_argument("DifferenceOrder: m must be 1, 2 or 3");
}

GridFunction difference(const TranslationPlan& plan, const GridFunction& f,
                        std::span<const double> y, DifferenceOrder m) {
    GridFunction g = f;
    for (int k = 0; k < m.m; ++k) g = base_for(plan, g, y) - translate(plan, g, y);
    return g;
}

GridFunction tilde_difference(const TranslationPlan& plan, const GridFunction& f,
                              std::span<const double> y, int k) {
    if (k < 1 || k > 3) throw std::invalid_argument("tilde_difference: k must be 1, 2 or 3");
    GridFunction sum = base_for(plan, f, y);
    std::vector<double> shift(y.begin(), y.end());
    for (int l = 1; l <= k; ++l) {
        const double scale = std::sqrt(static_cast<double>(l));
        for (std::size_t i = 0; i < shift.size(); ++i) shift[i] = scale * y[i];
        const double c = (l % 2 == 1 ? -1.0 : 1.0) * binomial(k, l);
        sum += c * translate(plan, f, shift);
    }
    return sum;
}

GridFunction spherical_difference(const TranslationPlan& plan, const GridFunction& f, double r,
                                  DifferenceOrder m) {
    if (!(r > 0.0)) throw std::invalid_argument("spherical_difference: r must be positive");
    GridFunction g = f;
    for (int k = 0; k < m.m; ++k) g = reconstruct(plan, g) - spherical_translate(plan, g, r);
    return g;
}

GridFunction tilde_spherical_difference(const TranslationPlan& plan, const GridFunction& f,
                                        double r, int k) {
    if (!(r > 0.0)) throw std::invalid_argument("tilde_spherical_difference: r must be positive");
    const auto& nodes = plan.sphere();
    std::vector<double> sum(f.size(), 0.0);
    double total = 0.0;
    for (const SphereNode& node : nodes) {
        std::vector<double> y(node.direction);
        for (double& c : y) c *= r;
        const GridFunction d = tilde_difference(plan, f, y, k);
        total += node.weight;
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += node.weight * d[i];
    }
    for (double& v : sum) v /= total;
    return GridFunction(f.grid_ptr(), std::move(sum), f.symmetry());
}

double script_J(double alpha, int k, double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("script_J: x must be >= 0");
    if (k < 1) throw std::invalid_argument("script_J: k must be positive");
    double sum = 0.0;
    for (int l = 0; l <= k; ++l) {
        const double c = (l % 2 == 1 ? -1.0 : 1.0) * binomial(k, l);
        sum += c * eval_j(alpha, std::sqrt(static_cast<double>(l)) * x);
    }
    return sum;
}

SmoothnessReport modulus(const TranslationPlan& plan, const GridFunction& f, DifferenceOrder m,
                         double p, std::span<const double> t_grid) {
    if (!(p >= 1.0)) throw std::invalid_argument("modulus: p must be >= 1");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0)) throw std::invalid_argument("modulus: t values must be positive");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("modulus: t_grid must increase");
    }
    const std::size_t nt = t_grid.size();
    std::vector<double> norms(nt * kSubgrid, 0.0);
    parallel_for(nt * kSubgrid, [&](std::size_t idx) {
        const std::size_t i = idx / kSubgrid;
        const std::size_t k = idx % kSubgrid;
        const double frac = static_cast<double>(kSubgrid - 1 - k) / static_cast<double>(kSubgrid - 1);
        const double h = t_grid[i] * std::pow(kSubgridSpan, -frac);
        norms[idx] = lp_norm(spherical_difference(plan, f, h, m), p);
    });
    SmoothnessReport report{std::vector<double>(t_grid.begin(), t_grid.end()), {}, p, plan.weight(), m.m};
    double running = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t k = 0; k < kSubgrid; ++k) running = std::max(running, norms[i * kSubgrid + k]);
        report.omega_values.push_back(running);
    }
    return report;
}

LogRule make_log_rule(double t_min, double t_max, std::size_t panels_per_decade,
                      std::size_t nodes_per_panel) {
    if (!(t_min > 0.0 && t_max > t_min)) throw std::invalid_argument("make_log_rule: need 0 < t_min < t_max");
    const double lo = std::log(t_min);
    const double hi = std::log(t_max);
    const auto panels = static_cast<std::size_t>(
        std::max(1.0, std::ceil(panels_per_decade * std::log10(t_max / t_min))));
    const quad::Rule ref = quad::gauss_legendre(nodes_per_panel);
    LogRule rule;
    rule.t_min = t_min;
    rule.t_max = t_max;
    const double width = (hi - lo) / static_cast<double>(panels);
    for (std::size_t k = 0; k < panels; ++k) {
        const quad::Rule mapped = quad::map_to_interval(ref, lo + width * k, lo + width * (k + 1));
        for (std::size_t q = 0; q < mapped.size(); ++q) {
            rule.t.push_back(std::exp(mapped.nodes[q]));
            rule.weights.push_back(mapped.weights[q]);
        }
    }
    return rule;
}

namespace {

// D(t) for the spherical seminorm: ||Delta_sph,t f||_p.
std::vector<double> spherical_profile(const TranslationPlan& plan, const GridFunction& f, double p,
                                      const std::vector<double>& ts) {
    std::vector<double> out(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) {
        out[i] = lp_norm(spherical_difference(plan, f, ts[i], DifferenceOrder(1)), p);
    });
    return out;
}

SeminormResult finish(std::vector<double> dp, const std::vector<double>& extra, double s, double p,
                      const LogRule& rule, double fnorm_p, double prefactor) {
    // dp: p-th power integrand values D(t)^p on the rule nodes; extra: D^p at t_min, 2 t_min, t_max.
    SeminormResult r;
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.t.size(); ++i) sum += rule.weights[i] * dp[i] * std::pow(rule.t[i], -s * p);
    add_tails(r, extra[0], extra[2], s, p, rule);
    if (extra[0] > 0.0 && extra[1] > 0.0) {
        r.small_t_slope = std::log(extra[1] / extra[0]) / (p * std::log(2.0));
        r.tail_converged = std::abs(r.small_t_slope - 2.0) <= 0.25;
    }
    if (fnorm_p > 0.0 && std::abs(extra[2] / fnorm_p - 1.0) > 0.05) r.tail_converged = false;
    const double total = sum + r.tail_small + r.tail_large;
    r.value = prefactor * std::pow(total, 1.0 / p);
    return r;
}

}  // namespace

SeminormResult gagliardo_spherical(const TranslationPlan& plan, const GridFunction& f, double s,
                                   double p, const LogRule& rule) {
    check_exponent(s, p, "gagliardo_spherical");
    std::vector<double> ts = rule.t;
    ts.push_back(rule.t_min);
    ts.push_back(2.0 * rule.t_min);
    ts.push_back(rule.t_max);
    std::vector<double> d = spherical_profile(plan, f, p, ts);
    for (double& v : d) v = std::pow(v, p);
    const std::size_t n = rule.t.size();
    std::vector<double> extra(d.begin() + static_cast<std::ptrdiff_t>(n), d.end());
    d.resize(n);
    // With T^t f = 0 for large t the difference tends to f itself.
    return finish(std::move(d), extra, s, p, rule, std::pow(lp_norm(f, p), p), 1.0);
}

SeminormResult gagliardo_weighted(const TranslationPlan& plan, const GridFunction& f, double s,
                                  double p, const LogRule& rule) {
    check_exponent(s, p, "gagliardo_weighted");
    std::vector<double> ts = rule.t;
    ts.push_back(rule.t_min);
    ts.push_back(2.0 * rule.t_min);
    ts.push_back(rule.t_max);
    const auto& nodes = plan.sphere();
    const GridFunction base = reconstruct(plan, f);
    std::vector<double> d(ts.size());
    // Sphere integral of ||f - T^{t Theta} f||_p^p against Theta^a dS.
    parallel_for(ts.size(), [&](std::size_t i) {
        double acc = 0.0;
        for (const SphereNode& node : nodes) {
            std::vector<double> y(node.direction);
            for (double& c : y) c *= ts[i];
            acc += node.weight * std::pow(lp_norm(base - translate(plan, f, y), p), p);
        }
        d[i] = acc;
    });
    const std::size_t n = rule.t.size();
    std::vector<double> extra(d.begin() + static_cast<std::ptrdiff_t>(n), d.end());
    d.resize(n);
    const double surface = plan.weight().sphere_measure();
    return finish(std::move(d), extra, s, p, rule, surface * std::pow(lp_norm(f, p), p), 1.0 / surface);
}

double besov_integral(const TranslationPlan& plan, const GridFunction& f, double s, double p,
                      const LogRule& rule) {
    check_exponent(s, p, "besov_integral");
    std::vector<double> ts = rule.t;
    ts.push_back(rule.t_max);
    ts.insert(ts.begin(), rule.t_min);
    const SmoothnessReport rep = modulus(plan, f, DifferenceOrder(1), p, ts);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.t.size(); ++i) {
        sum += rule.weights[i] * std::pow(rep.omega_values[i + 1], p) * std::pow(rule.t[i], -s * p);
    }
    SeminormResult tails;
    add_tails(tails, std::pow(rep.omega_values.front(), p), std::pow(rep.omega_values.back(), p), s, p, rule);
    return sum + tails.tail_small + tails.tail_large;
}

double fractional_sobolev_norm(const TranslationPlan& plan, const GridFunction& f, double s,
                               double p) {
    const double semi = gagliardo_spherical(plan, f, s, p).value;
    return std::pow(std::pow(lp_norm(f, p), p) + std::pow(semi, p), 1.0 / p);
}

}  // namespace bh
