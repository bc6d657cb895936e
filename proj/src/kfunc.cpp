#include "bh/kfunc.hpp"

#include "bh/parallel.hpp"
#include "bh/smoothness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bh {

namespace {

constexpr int kStencilWidth = 5;
constexpr std::size_t kMinStencilNodes = 16;

// Fornberg's recursion: weights for derivatives 0..2 at z from the given nodes.
void fornberg(double z, const std::vector<double>& x, std::vector<std::array<double, 3>>& c) {
    const std::size_t n = x.size();
    c.assign(n, {0.0, 0.0, 0.0});
    double c1 = 1.0;
    double c4 = x[0] - z;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const int mn = static_cast<int>(std::min<std::size_t>(i, 2));
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
}

tensor::Matrix stencil_matrix(const AxisGrid& axis, double a) {
    const std::size_t m = axis.size();
    // Extended node list: mirrored nodes -x_k (even extension) followed by the axis itself.
    constexpr std::size_t mirror = kStencilWidth;
    std::vector<double> pos;
    std::vector<std::size_t> col;
    for (std::size_t k = mirror; k-- > 0;) {
        pos.push_back(-axis.nodes[k]);
        col.push_back(k);
    }
    for (std::size_t k = 0; k < m; ++k) {
        pos.push_back(axis.nodes[k]);
        col.push_back(k);
    }
    tensor::Matrix out = tensor::Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    std::vector<std::array<double, 3>> w;
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t centre = j + mirror;
        std::size_t first = centre - kStencilWidth / 2;
        first = std::min(first, pos.size() - kStencilWidth);
        std::vector<double> x(pos.begin() + static_cast<std::ptrdiff_t>(first),
                              pos.begin() + static_cast<std::ptrdiff_t>(first + kStencilWidth));
        fornberg(axis.nodes[j], x, w);
        for (int q = 0; q < kStencilWidth; ++q) {
            const double coeff = w[q][2] + a / axis.nodes[j] * w[q][1];
            out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(col[first + q])) += coeff;
        }
    }
    return out;
}

}  // namespace

GridFunction bessel_laplacian(const HankelPlan& plan, const GridFunction& f, LaplacianMode mode) {
    if (mode == LaplacianMode::spectral) return bessel_laplacian_power(plan, f, 1);
    const Grid& g = f.grid();
    for (std::size_t i = 0; i < g.dim(); ++i) {
        if (g.axis(i).size() < kMinStencilNodes) {
            throw std::invalid_argument("bessel_laplacian: stencil mode needs at least 16 nodes per axis");
        }
    }
    std::vector<double> sum(f.size(), 0.0);
    for (std::size_t i = 0; i < g.dim(); ++i) {
        const auto part = tensor::apply_along_axis(f.values(), g.shape(), i,
                                                   stencil_matrix(g.axis(i), g.weight().a(i)));
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += part[k];
    }
    return GridFunction(f.grid_ptr(), std::move(sum), f.symmetry());
}

GridFunction bessel_laplacian_power(const HankelPlan& plan, const GridFunction& f, int m) {
    if (m < 0) throw std::invalid_argument("bessel_laplacian_power: m must be >= 0");
    if (m == 0) return f;
    return apply_symbol(plan, f, Multiplier::radial([m](double r) { return std::pow(-r * r, m); },
                                                    "(-|xi|^2)^m"));
}

SobolevNorm sobolev_norm(const HankelPlan& plan, const GridFunction& f, int m, double p) {
    if (m < 0 || m > 2) throw std::invalid_argument("sobolev_norm: m must be 0, 1 or 2");
    SobolevNorm out{m, p, {}, 0.0};
    double acc = 0.0;
    const SpectralFunction F = hankel_forward(plan, f);
    for (int k = 0; k <= m; ++k) {
        const double c = k == 0 ? lp_norm(f, p)
                                : lp_norm(hankel_inverse(plan, apply_multiplier(F, Multiplier::radial(
                                              [k](double r) { return std::pow(-r * r, k); }, "lap"))),
                                          p);
        out.components.push_back(c);
        acc += std::pow(c, p);
    }
    out.total = std::pow(acc, 1.0 / p);
    return out;
}

double eta_cutoff(double u) {
    if (u <= 1.0) return 1.0;
    if (u >= 2.0) return 0.0;
    const auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    const double up = psi(2.0 - u);
    return up / (up + psi(u - 1.0));
}

SpectralFunction smooth_Pnu_spectrum(const HankelPlan& plan, const GridFunction& f, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("smooth_Pnu: nu must be positive");
    return apply_multiplier(hankel_forward(plan, f),
                            Multiplier::radial([nu](double r) { return eta_cutoff(r / nu); }, "eta(|xi|/nu)"));
}

GridFunction smooth_Pnu(const HankelPlan& plan, const GridFunction& f, double nu) {
    return hankel_inverse(plan, smooth_Pnu_spectrum(plan, f, nu));
}

double best_approx_E(const HankelPlan& plan, const GridFunction& f, double nu, double p) {
    return lp_norm(f - smooth_Pnu(plan, f, nu), p);
}

KFunctionalResult k_functional(const HankelPlan& plan, const GridFunction& f, double tau, int m,
                               double p) {
    if (!(tau > 0.0)) throw std::invalid_argument("k_functional: t must be positive");
    if (m < 1 || m > 3) throw std::invalid_argument("k_functional: m must be 1, 2 or 3");
    const double t = std::pow(tau, 1.0 / (2.0 * m));
    KFunctionalResult best{lp_norm(f, p), 0.0};
    const SpectralFunction F = hankel_forward(plan, f);
    for (int k = 0; k < 16; ++k) {
        const double nu = std::exp2((k - 6) / 3.0) / t;
        const SpectralFunction P = apply_multiplier(
            F, Multiplier::radial([nu](double r) { return eta_cutoff(r / nu); }, "eta"));
        const SpectralFunction LP = apply_multiplier(
            P, Multiplier::radial([m](double r) { return std::pow(-r * r, m); }, "lap^m"));
        const double score = lp_norm(f - hankel_inverse(plan, P), p) + tau * lp_norm(hankel_inverse(plan, LP), p);
        if (score < best.value) best = {score, nu};
    }
    return best;
}

EquivalenceTable equivalence_experiment(const TranslationPlan& plan,
                                        const std::vector<NamedFunction>& corpus, int m, double p,
                                        std::span<const double> t_grid) {
    if (corpus.empty()) throw std::invalid_argument("equivalence_experiment: empty corpus");
    const HankelPlan& hp = plan.hankel();
    EquivalenceTable table;
    std::vector<std::vector<EquivalenceRow>> per(corpus.size());
    std::vector<char> skip(corpus.size(), 0);
    parallel_for(corpus.size(), [&](std::size_t i) {
        const GridFunction& f = corpus[i].f;
        if (lp_norm(f, p) == 0.0) {
            skip[i] = 1;
            return;
        }
        const SmoothnessReport rep = modulus(plan, f, DifferenceOrder(m), p, t_grid);
        for (std::size_t k = 0; k < t_grid.size(); ++k) {
            const double t = t_grid[k];
            const double K = k_functional(hp, f, std::pow(t, 2.0 * m), m, p).value;
            const double w = rep.omega_values[k];
            per[i].push_back({corpus[i].id, t, K, w, K / w});
        }
    });
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (skip[i]) {
            table.excluded.push_back(corpus[i].id);
            continue;
        }
        for (const auto& row : per[i]) {
            lo = std::min(lo, row.ratio);
            hi = std::max(hi, row.ratio);
            table.rows.push_back(row);
        }
    }
    if (table.rows.empty()) return table;
    table.min_ratio = lo;
    table.max_ratio = hi;
    table.constant = std::max(hi, 1.0 / lo);
    return table;
}

double loglog_slope(std::span<const double> x, std::span<const double> y, double floor) {
    if (x.size() != y.size()) throw std::invalid_argument("loglog_slope: size mismatch");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > floor) || !(x[i] > 0.0)) continue;
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("loglog_slope: fewer than two usable points");
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace bh
