#pragma once

// Weighted geometry on the positive orthant: weight vectors, tensor grids,
// quadrature-backed L^p_a norms and the weighted half-sphere rule.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace bh {

/// Exponent vector a = (a_1, ..., a_n) of the measure x^a dx on R^n_+.
class WeightVector {
public:
    explicit WeightVector(std::vector<double> a);

    std::size_t dim() const { return a_.size(); }
    double a(std::size_t i) const { return a_[i]; }
    double alpha(std::size_t i) const { return 0.5 * (a_[i] - 1.0); }
    const std::vector<double>& exponents() const { return a_; }

    /// |a| = sum of the exponents.
    double total() const;
    /// n + |a|, the homogeneous dimension of the weighted space.
    double homogeneous_dim() const { return static_cast<double>(dim()) + total(); }
    /// Order (n + |a|)/2 - 1 of the radial Bessel function.
    double lambda() const { return 0.5 * homogeneous_dim() - 1.0; }
    /// Weighted measure of the positive unit half-sphere.
    double sphere_measure() const;

    bool operator==(const WeightVector& other) const { return a_ == other.a_; }

private:
    std::vector<double> a_;
};

enum class AxisRule {
    gauss_legendre_mapped,  ///< 6 geometric panels (ratio 2) clustered at 0
    composite,              ///< uniform 8-node panels
    graded                  ///< 20 geometric refinement panels at 0, then uniform panels
};

/// One axis of a tensor grid. The weights already contain the factor x^a.
struct AxisGrid {
    double exponent = 0.0;
    double cutoff = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// Panel rule over consecutive break points; the first panel starting at 0 uses a
/// Gauss-Jacobi rule so that the factor x^a is integrated exactly.
AxisGrid make_panel_grid(double exponent, std::span<const double> breaks,
                         std::size_t nodes_per_panel);

/// Axis grid approximating integrals over (0, R] against x^{a_i} dx.
/// Requires M >= 8, R > 0 and a_i > 0.
AxisGrid make_axis_grid(double a_i, std::size_t M, double R,
                        AxisRule rule = AxisRule::composite);

/// Tensor-product grid on the truncated orthant.
class Grid {
public:
    Grid(WeightVector weight, std::vector<AxisGrid> axes);

    const WeightVector& weight() const { return weight_; }
    std::size_t dim() const { return axes_.size(); }
    const AxisGrid& axis(std::size_t i) const { return axes_[i]; }
    const std::vector<AxisGrid>& axes() const { return axes_; }
    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t size() const { return size_; }

    /// Coordinates of the node with flat (row-major) index.
    void point(std::size_t flat, std::span<double> out) const;
    std::vector<double> point(std::size_t flat) const;
    /// Product of the per-axis quadrature weights.
    double quad_weight(std::size_t flat) const;
    /// Euclidean norm of the node.
    double radius(std::size_t flat) const;

private:
    WeightVector weight_;
    std::vector<AxisGrid> axes_;
    std::vector<std::size_t> shape_;
    std::size_t size_ = 0;
    std::vector<double> quad_weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(const WeightVector& weight, std::size_t M, double R,
                  AxisRule rule = AxisRule::composite);

bool same_grid(const Grid& lhs, const Grid& rhs);

enum class Symmetry { general, separable, radial };

/// Samples of a real function on the nodes of a Grid.
class GridFunction {
public:
    GridFunction(GridPtr grid, std::vector<double> values, Symmetry symmetry = Symmetry::general);

    static GridFunction zeros(GridPtr grid);
    static GridFunction sample(GridPtr grid, const std::function<double(std::span<const double>)>& f,
                               Symmetry symmetry = Symmetry::general);

    const GridPtr& grid_ptr() const { return grid_; }
    const Grid& grid() const { return *grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    Symmetry symmetry() const { return symmetry_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(double c);

private:
    GridPtr grid_;
    std::vector<double> values_;
    Symmetry symmetry_;
};

GridFunction operator+(GridFunction lhs, const GridFunction& rhs);
GridFunction operator-(GridFunction lhs, const GridFunction& rhs);
GridFunction operator*(double c, GridFunction f);

/// Grid function with a stable identifier, as used in experiment tables.
struct NamedFunction {
    std::string id;
    GridFunction f;
};

/// Throws std::invalid_argument unless both functions live on the same grid.
void require_same_grid(const GridFunction& f, const GridFunction& g, const char* what);

/// Weighted L^p norm by tensor quadrature; p = infinity gives the grid maximum.
double lp_norm(const GridFunction& f, double p);

/// Quadrature approximation of the weighted inner product.
double inner_product(const GridFunction& f, const GridFunction& g);

/// Maximum absolute difference over the nodes.
double sup_distance(const GridFunction& f, const GridFunction& g);

struct SphereNode {
    std::vector<double> direction;
    double weight = 0.0;
};

/// Rule for integrals over the positive unit half-sphere against Theta^a dS.
/// Q nodes per angular dimension (Q >= 4); n = 1 is the single node Theta = 1.
std::vector<SphereNode> sphere_rule(const WeightVector& weight, std::size_t Q);

/// Radial profile phi(r), integrated against r^{n+|a|-1} dr.
class RadialProfile {
public:
    RadialProfile(WeightVector weight, AxisGrid radial, std::vector<double> values,
                  std::function<double(double)> closed_form = {});

    static RadialProfile sample(WeightVector weight, AxisGrid radial,
                                std::function<double(double)> phi);

    const WeightVector& weight() const { return weight_; }
    const AxisGrid& radial() const { return radial_; }
    const std::vector<double>& values() const { return values_; }
    const std::function<double(double)>& closed_form() const { return closed_form_; }

private:
    WeightVector weight_;
    AxisGrid radial_;
    std::vector<double> values_;
    std::function<double(double)> closed_form_;
};

/// Radial axis whose weights integrate against r^{n+|a|-1}.
AxisGrid make_radial_axis(const WeightVector& weight, std::size_t M, double R,
                          AxisRule rule = AxisRule::graded);

/// ||f||_{p,a} of the radial function f(x) = phi(|x|).
double radial_lp_norm(const RadialProfile& phi, double p);

}  // namespace bh
