#include "bh/core.hpp"

#include "bh/quadrature.hpp"
#include "bh/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bh {

namespace tensor {

std::vector<double> apply_along_axis(const std::vector<double>& values,
                                     const std::vector<std::size_t>& shape, std::size_t axis,
                                     const Matrix& matrix) {
    if (axis >= shape.size() || static_cast<std::size_t>(matrix.cols()) != shape[axis]) {
        throw std::invalid_argument("apply_along_axis: matrix does not match axis length");
    }
    std::size_t outer = 1;
    for (std::size_t i = 0; i < axis; ++i) outer *= shape[i];
    std::size_t inner = 1;
    for (std::size_t i = axis + 1; i < shape.size(); ++i) inner *= shape[i];
    const auto m_in = static_cast<Eigen::Index>(shape[axis]);
    const auto m_out = matrix.rows();
    const auto in_cols = static_cast<Eigen::Index>(inner);

    std::vector<double> out(outer * static_cast<std::size_t>(m_out) * inner);
    using Block = Eigen::Map<const Matrix>;
    using OutBlock = Eigen::Map<Matrix>;
    for (std::size_t o = 0; o < outer; ++o) {
        Block in(values.data() + o * static_cast<std::size_t>(m_in) * inner, m_in, in_cols);
        OutBlock res(out.data() + o * static_cast<std::size_t>(m_out) * inner, m_out, in_cols);
        res.noalias() = matrix * in;
    }
    return out;
}

}  // namespace tensor

WeightVector::WeightVector(std::vector<double> a) : a_(std::move(a)) {
    if (a_.empty() || a_.size() > 3) {
        throw std::invalid_argument("WeightVector: dimension must be 1, 2 or 3");
    }
    for (double ai : a_) {
        if (!(ai > 0.0) || !std::isfinite(ai)) {
            throw std::invalid_argument("WeightVector: exponents must be positive");
        }
    }
}

double WeightVector::total() const { return std::accumulate(a_.begin(), a_.end(), 0.0); }

double WeightVector::sphere_measure() const {
    double log_num = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) log_num += std::lgamma(alpha(i) + 1.0);
    const double n = static_cast<double>(dim());
    return std::exp(log_num - (n - 1.0) * std::log(2.0) - std::lgamma(0.5 * homogeneous_dim()));
}

AxisGrid make_panel_grid(double exponent, std::span<const double> breaks,
                         std::size_t nodes_per_panel) {
    if (breaks.size() < 2) throw std::invalid_argument("make_panel_grid: need two break points");
    if (!(exponent > -1.0)) throw std::invalid_argument("make_panel_grid: exponent must exceed -1");
    const quad::Rule legendre = quad::gauss_legendre(nodes_per_panel);
    AxisGrid grid;
    grid.exponent = exponent;
    grid.cutoff = breaks.back();
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double lo = breaks[p];
        const double hi = breaks[p + 1];
        if (!(hi > lo)) throw std::invalid_argument("make_panel_grid: breaks must increase");
        if (lo == 0.0) {
            // x^a on [0, h]: (h/2)^{a+1} (1+u)^a du
            const quad::Rule jac = quad::gauss_jacobi(nodes_per_panel, 0.0, exponent);
            const double scale = std::pow(0.5 * hi, exponent + 1.0);
            for (std::size_t k = 0; k < jac.size(); ++k) {
                grid.nodes.push_back(0.5 * hi * (1.0 + jac.nodes[k]));
                grid.weights.push_back(scale * jac.weights[k]);
            }
        } else {
            const quad::Rule mapped = quad::map_to_interval(legendre, lo, hi);
            for (std::size_t k = 0; k < mapped.size(); ++k) {
                grid.nodes.push_back(mapped.nodes[k]);
                grid.weights.push_back(mapped.weights[k] * std::pow(mapped.nodes[k], exponent));
            }
        }
    }
    return grid;
}

namespace {

AxisGrid build_axis(double exponent, std::size_t M, double R, AxisRule rule) {
    std::vector<double> breaks;
    std::size_t per_panel = 8;
    switch (rule) {
        case AxisRule::gauss_legendre_mapped: {
            constexpr int kPanels = 6;
            per_panel = (M + kPanels - 1) / kPanels;
            const double h = R / 63.0;  // widths h, 2h, ..., 32h
            breaks.push_back(0.0);
            double w = h;
            for (int p = 0; p < kPanels; ++p) {
                breaks.push_back(p == kPanels - 1 ? R : breaks.back() + w);
                w *= 2.0;
            }
            break;
        }
        case AxisRule::composite: {
            const std::size_t panels = (M + 7) / 8;
            breaks.resize(panels + 1);
            for (std::size_t p = 0; p <= panels; ++p) {
                breaks[p] = R * static_cast<double>(p) / static_cast<double>(panels);
            }
            break;
        }
        case AxisRule::graded: {
            constexpr int kLevels = 20;
            const double inner = std::min(1.0, 0.25 * R);
            breaks.push_back(0.0);
            for (int l = kLevels; l >= 0; --l) breaks.push_back(inner * std::ldexp(1.0, -l));
            const std::size_t panels = std::max<std::size_t>(1, (M + 7) / 8);
            for (std::size_t p = 1; p <= panels; ++p) {
                breaks.push_back(inner + (R - inner) * static_cast<double>(p) /
                                             static_cast<double>(panels));
            }
            break;
        }
    }
    return make_panel_grid(exponent, breaks, per_panel);
}

}  // namespace

AxisGrid make_axis_grid(double a_i, std::size_t M, double R, AxisRule rule) {
    if (!(a_i > 0.0)) throw std::invalid_argument("make_axis_grid: exponent must be positive");
    if (M < 8) throw std::invalid_argument("make_axis_grid: need at least 8 nodes");
    if (!(R > 0.0)) throw std::invalid_argument("make_axis_grid: cutoff must be positive");
    return build_axis(a_i, M, R, rule);
}

AxisGrid make_radial_axis(const WeightVector& weight, std::size_t M, double R, AxisRule rule) {
    if (M < 8) throw std::invalid_argument("make_radial_axis: need at least 8 nodes");
    if (!(R > 0.0)) throw std::invalid_argument("make_radial_axis: cutoff must be positive");
    return build_axis(weight.homogeneous_dim() - 1.0, M, R, rule);
}

Grid::Grid(WeightVector weight, std::vector<AxisGrid> axes)
    : weight_(std::move(weight)), axes_(std::move(axes)) {
    if (axes_.size() != weight_.dim()) throw std::invalid_argument("Grid: one axis per dimension");
    size_ = 1;
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        const AxisGrid& ax = axes_[i];
        if (ax.nodes.empty() || ax.nodes.size() != ax.weights.size()) {
            throw std::invalid_argument("Grid: malformed axis");
        }
        for (std::size_t k = 0; k < ax.size(); ++k) {
            if (!(ax.nodes[k] > 0.0) || !(ax.weights[k] > 0.0) ||
                (k > 0 && !(ax.nodes[k] > ax.nodes[k - 1]))) {
                throw std::invalid_argument("Grid: nodes must increase and weights be positive");
            }
        }
        shape_.push_back(ax.size());
        size_ *= ax.size();
    }
    quad_weights_.assign(size_, 1.0);
    std::vector<double> x(dim());
    for (std::size_t flat = 0; flat < size_; ++flat) {
        std::size_t rem = flat;
        double w = 1.0;
        for (std::size_t i = dim(); i-- > 0;) {
            w *= axes_[i].weights[rem % shape_[i]];
            rem /= shape_[i];
        }
        quad_weights_[flat] = w;
    }
}

void Grid::point(std::size_t flat, std::span<double> out) const {
    for (std::size_t i = dim(); i-- > 0;) {
        out[i] = axes_[i].nodes[flat % shape_[i]];
        flat /= shape_[i];
    }
}

std::vector<double> Grid::point(std::size_t flat) const {
    std::vector<double> x(dim());
    point(flat, x);
    return x;
}

double Grid::quad_weight(std::size_t flat) const { return quad_weights_[flat]; }

double Grid::radius(std::size_t flat) const {
    double r2 = 0.0;
    for (std::size_t i = dim(); i-- > 0;) {
        const double xi = axes_[i].nodes[flat % shape_[i]];
        r2 += xi * xi;
        flat /= shape_[i];
    }
    return std::sqrt(r2);
}

GridPtr make_grid(const WeightVector& weight, std::size_t M, double R, AxisRule rule) {
    std::vector<AxisGrid> axes;
    for (std::size_t i = 0; i < weight.dim(); ++i) axes.push_back(make_axis_grid(weight.a(i), M, R, rule));
    return std::make_shared<const Grid>(weight, std::move(axes));
}

bool same_grid(const Grid& lhs, const Grid& rhs) {
    if (&lhs == &rhs) return true;
    if (!(lhs.weight() == rhs.weight())) return false;
    for (std::size_t i = 0; i < lhs.dim(); ++i) {
        if (lhs.axis(i).nodes != rhs.axis(i).nodes || lhs.axis(i).weights != rhs.axis(i).weights) {
            return false;
        }
    }
    return true;
}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values, Symmetry symmetry)
    : grid_(std::move(grid)), values_(std::move(values)), symmetry_(symmetry) {
    if (!grid_) throw std::invalid_argument("GridFunction: null grid");
    if (values_.size() != grid_->size()) throw std::invalid_argument("GridFunction: shape mismatch");
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
    }
}

GridFunction GridFunction::zeros(GridPtr grid) {
    const std::size_t n = grid->size();
    return GridFunction(std::move(grid), std::vector<double>(n, 0.0), Symmetry::radial);
}

GridFunction GridFunction::sample(GridPtr grid,
                                  const std::function<double(std::span<const double>)>& f,
                                  Symmetry symmetry) {
    std::vector<double> values(grid->size());
    std::vector<double> x(grid->dim());
    for (std::size_t k = 0; k < values.size(); ++k) {
        grid->point(k, x);
        values[k] = f(x);
    }
    return GridFunction(std::move(grid), std::move(values), symmetry);
}

void require_same_grid(const GridFunction& f, const GridFunction& g, const char* what) {
    if (!same_grid(f.grid(), g.grid())) {
        throw std::invalid_argument(std::string(what) + ": grid mismatch");
    }
}

namespace {
Symmetry combine(Symmetry a, Symmetry b) { return a == b ? a : Symmetry::general; }
}  // namespace

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require_same_grid(*this, other, "GridFunction::+=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    symmetry_ = combine(symmetry_, other.symmetry_);
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require_same_grid(*this, other, "GridFunction::-=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    symmetry_ = combine(symmetry_, other.symmetry_);
    return *this;
}

GridFunction& GridFunction::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

GridFunction operator+(GridFunction lhs, const GridFunction& rhs) { return lhs += rhs; }
GridFunction operator-(GridFunction lhs, const GridFunction& rhs) { return lhs -= rhs; }
GridFunction operator*(double c, GridFunction f) { return f *= c; }

double lp_norm(const GridFunction& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    const auto& v = f.values();
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    const Grid& g = f.grid();
    double sum = 0.0;
    if (p == 2.0) {
        for (std::size_t k = 0; k < v.size(); ++k) sum += v[k] * v[k] * g.quad_weight(k);
        return std::sqrt(sum);
    }
    if (p == 1.0) {
        for (std::size_t k = 0; k < v.size(); ++k) sum += std::abs(v[k]) * g.quad_weight(k);
        return sum;
    }
    for (std::size_t k = 0; k < v.size(); ++k) sum += std::pow(std::abs(v[k]), p) * g.quad_weight(k);
    return std::pow(sum, 1.0 / p);
}

double inner_product(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g, "inner_product");
    const Grid& grid = f.grid();
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) sum += f[k] * g[k] * grid.quad_weight(k);
    return sum;
}

double sup_distance(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g, "sup_distance");
    double m = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) m = std::max(m, std::abs(f[k] - g[k]));
    return m;
}

std::vector<SphereNode> sphere_rule(const WeightVector& weight, std::size_t Q) {
    const std::size_t n = weight.dim();
    if (Q < 4) throw std::invalid_argument("sphere_rule: need Q >= 4");
    std::vector<SphereNode> out;
    if (n == 1) {
        out.push_back({{1.0}, 1.0});
        return out;
    }
    if (n == 2) {
        // Theta = (sqrt(u), sqrt(1-u)): Theta^a dS = (1/2) u^{(a1-1)/2} (1-u)^{(a2-1)/2} du
        const quad::Rule r = quad::gauss_jacobi_unit(Q, 0.5 * (weight.a(0) - 1.0),
                                                     0.5 * (weight.a(1) - 1.0));
        for (std::size_t k = 0; k < r.size(); ++k) {
            const double u = r.nodes[k];
            out.push_back({{std::sqrt(u), std::sqrt(1.0 - u)}, 0.5 * r.weights[k]});
        }
        return out;
    }
    if (n == 3) {
        // u1 = v w, u2 = v (1-w), u3 = 1 - v on the simplex of squared coordinates.
        const quad::Rule rv = quad::gauss_jacobi_unit(Q, 0.5 * (weight.a(0) + weight.a(1)),
                                                      0.5 * (weight.a(2) - 1.0));
        const quad::Rule rw = quad::gauss_jacobi_unit(Q, 0.5 * (weight.a(0) - 1.0),
                                                      0.5 * (weight.a(1) - 1.0));
        for (std::size_t i = 0; i < rv.size(); ++i) {
            for (std::size_t j = 0; j < rw.size(); ++j) {
                const double v = rv.nodes[i];
                const double w = rw.nodes[j];
                out.push_back({{std::sqrt(v * w), std::sqrt(v * (1.0 - w)), std::sqrt(1.0 - v)},
                               0.25 * rv.weights[i] * rw.weights[j]});
            }
        }
        return out;
    }
    throw std::invalid_argument("sphere_rule: unsupported dimension");
}

RadialProfile::RadialProfile(WeightVector weight, AxisGrid radial, std::vector<double> values,
                             std::function<double(double)> closed_form)
    : weight_(std::move(weight)),
      radial_(std::move(radial)),
      values_(std::move(values)),
      closed_form_(std::move(closed_form)) {
    if (values_.size() != radial_.size()) throw std::invalid_argument("RadialProfile: size mismatch");
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) throw std::invalid_argument("RadialProfile: non-finite value");
        if (!(radial_.nodes[k] > 0.0) || (k > 0 && !(radial_.nodes[k] > radial_.nodes[k - 1]))) {
            throw std::invalid_argument("RadialProfile: nodes must be positive and increasing");
        }
    }
}

RadialProfile RadialProfile::sample(WeightVector weight, AxisGrid radial,
                                    std::function<double(double)> phi) {
    std::vector<double> values(radial.size());
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = phi(radial.nodes[k]);
    return RadialProfile(std::move(weight), std::move(radial), std::move(values), std::move(phi));
}

double radial_lp_norm(const RadialProfile& phi, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("radial_lp_norm: p must be >= 1");
    const auto& v = phi.values();
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) sum += std::pow(std::abs(v[k]), p) * phi.radial().weights[k];
    return std::pow(phi.weight().sphere_measure() * sum, 1.0 / p);
}

}  // namespace bh
