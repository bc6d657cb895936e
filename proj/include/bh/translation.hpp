#pragma once

// Generalized (Bessel) translation T^t along each axis and its spherical average.

#include "bh/core.hpp"
#include "bh/hankel.hpp"
#include "bh/quadrature.hpp"
#include "bh/tensor.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace bh {

struct TranslationOptions {
    std::size_t theta_nodes = 48;   ///< Gauss-Jacobi nodes in u = cos(theta)
    std::size_t sphere_nodes = 10;  ///< half-sphere nodes per angular dimension
    double oversampling = 8.0;      ///< auxiliary grid points per unit of R * Xi
};

/// Off-grid values come from the band-limited reconstruction through the plan's
/// frequency grid, resampled to a fine uniform grid and read by 8-point Lagrange
/// interpolation. Values at distances beyond the cutoff R are taken as zero.
class TranslationPlan {
public:
    explicit TranslationPlan(HankelPlanPtr hankel, TranslationOptions options = {});

    const HankelPlan& hankel() const { return *hankel_; }
    const HankelPlanPtr& hankel_ptr() const { return hankel_; }
    const WeightVector& weight() const { return hankel_->weight(); }
    const TranslationOptions& options() const { return options_; }

    /// Rule in u = cos(theta) whose weights include Gamma(alpha+1)/(sqrt(pi) Gamma(alpha+1/2)).
    const quad::Rule& theta_rule(std::size_t axis) const { return theta_[axis]; }
    const std::vector<SphereNode>& sphere() const { return sphere_; }

    /// Matrix of the one-axis translation by t >= 0 on that axis's nodes (cached).
    /// t = 0 gives the identity.
    std::shared_ptr<const tensor::Matrix> axis_matrix(std::size_t axis, double t) const;

    /// The interpolation pipeline evaluated at t = 0: the band-limited reconstruction
    /// read back at the nodes. Differences against it vanish to second order as t -> 0.
    const tensor::Matrix& reconstruction_matrix(std::size_t axis) const { return reconstruct_[axis]; }

    /// Fine-grid samples reconstructed from grid values along one axis.
    const tensor::Matrix& resampler(std::size_t axis) const { return resample_[axis]; }
    double fine_step(std::size_t axis) const { return step_[axis]; }

private:
    HankelPlanPtr hankel_;
    TranslationOptions options_;
    std::vector<quad::Rule> theta_;
    std::vector<SphereNode> sphere_;
    std::vector<tensor::Matrix> resample_;
    std::vector<double> step_;
    std::vector<tensor::Matrix> reconstruct_;

    tensor::Matrix build_matrix(std::size_t axis, double t) const;

    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<std::size_t, double>, std::shared_ptr<const tensor::Matrix>> cache_;
    mutable std::size_t cache_bytes_ = 0;
};

using TranslationPlanPtr = std::shared_ptr<const TranslationPlan>;

TranslationPlanPtr make_translation_plan(HankelPlanPtr hankel, TranslationOptions options = {});

/// T^t f for t in R^n_+.
GridFunction translate(const TranslationPlan& plan, const GridFunction& f, std::span<const double> t);

/// Half-sphere average (1/|S|) * integral of T^{r Theta} f against Theta^a dS.
GridFunction spherical_translate(const TranslationPlan& plan, const GridFunction& f, double r);

/// f read back through the reconstruction pipeline on every axis.
GridFunction reconstruct(const TranslationPlan& plan, const GridFunction& f);

/// Convenience: T^t for a one-dimensional weight.
GridFunction translate(const TranslationPlan& plan, const GridFunction& f, double t);

}  // namespace bh
