#pragma once

// Multi-dimensional Hankel transform on tensor grids. The kernel factorizes as
// prod_i j_{alpha_i}(x_i xi_i), so every transform is a sequence of dense per-axis
// matrix applications.

#include "bh/core.hpp"
#include "bh/tensor.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace bh {

/// Samples of a Hankel transform on a frequency grid.
class SpectralFunction {
public:
    SpectralFunction(GridPtr freq, std::vector<double> values);

    const GridPtr& grid_ptr() const { return freq_; }
    const Grid& grid() const { return *freq_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    SpectralFunction& operator+=(const SpectralFunction& other);
    SpectralFunction& operator*=(double c);

private:
    GridPtr freq_;
    std::vector<double> values_;
};

/// Pointwise symbol on frequency nodes.
struct Multiplier {
    std::function<double(std::span<const double>)> symbol;
    std::string label;

    /// Symbol depending on |xi| only.
    static Multiplier radial(std::function<double(double)> profile, std::string label);
    static Multiplier identity();
};

/// Precomputed per-axis transform matrices between a space grid and a frequency grid.
class HankelPlan {
public:
    HankelPlan(GridPtr space, GridPtr freq);

    const GridPtr& space() const { return space_; }
    const GridPtr& freq() const { return freq_; }
    const WeightVector& weight() const { return space_->weight(); }
    std::size_t dim() const { return space_->dim(); }

    /// Rows: frequency nodes; columns: space nodes.
    const tensor::Matrix& forward(std::size_t axis) const { return forward_[axis]; }
    /// Rows: space nodes; columns: frequency nodes.
    const tensor::Matrix& inverse(std::size_t axis) const { return inverse_[axis]; }
    /// Per-axis factor 2^{1-a_i} / Gamma(alpha_i+1)^2 of the inversion formula.
    double inverse_constant(std::size_t axis) const { return inverse_constant_[axis]; }

    /// Reconstruction matrix from frequency samples to arbitrary points on one axis.
    tensor::Matrix evaluation_matrix(std::size_t axis, std::span<const double> points) const;

private:
    GridPtr space_;
    GridPtr freq_;
    std::vector<tensor::Matrix> forward_;
    std::vector<tensor::Matrix> inverse_;
    std::vector<double> inverse_constant_;
};

using HankelPlanPtr = std::shared_ptr<const HankelPlan>;

HankelPlanPtr make_hankel_plan(GridPtr space, GridPtr freq);

/// Same node family on both sides: space cutoff R, frequency cutoff Xi.
HankelPlanPtr make_hankel_plan(const WeightVector& weight, std::size_t M, double R, double Xi,
                               AxisRule rule = AxisRule::composite);

SpectralFunction hankel_forward(const HankelPlan& plan, const GridFunction& f);
GridFunction hankel_inverse(const HankelPlan& plan, const SpectralFunction& F);

/// Hankel transform of the radial function phi(|x|) at the given |xi| values.
std::vector<double> radial_hankel_values(const RadialProfile& phi, std::span<const double> xi);

/// Radial transform as a profile on a radial frequency axis.
RadialProfile radial_hankel(const RadialProfile& phi, const AxisGrid& xi_axis);

SpectralFunction apply_multiplier(const SpectralFunction& F, const Multiplier& m);

/// Inverse transform of m * forward transform.
GridFunction apply_symbol(const HankelPlan& plan, const GridFunction& f, const Multiplier& m);

/// Bessel convolution through the convolution theorem.
GridFunction bessel_convolve(const HankelPlan& plan, const GridFunction& f, const GridFunction& g);

/// Value of the band-limited reconstruction of F at an arbitrary point.
double evaluate_at(const HankelPlan& plan, const SpectralFunction& F, std::span<const double> x);

/// Frequency-side inner product with the inversion constant (Parseval form).
double spectral_inner_product(const HankelPlan& plan, const SpectralFunction& F,
                              const SpectralFunction& G);

/// Sample a closed-form spectrum on the plan's frequency grid.
SpectralFunction sample_spectrum(const HankelPlan& plan,
                                 const std::function<double(std::span<const double>)>& spectrum);

}  // namespace bh
