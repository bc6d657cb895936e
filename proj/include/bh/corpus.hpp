#pragma once

// Named test functions with closed-form evaluators.

#include "bh/core.hpp"
#include "bh/hankel.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace bh {

using PointFunction = std::function<double(std::span<const double>)>;

struct CorpusItem {
    std::string id;
    PointFunction space;     ///< closed form in x (may be empty)
    PointFunction spectrum;  ///< closed-form Hankel transform (may be empty)
    bool smooth_even = true; ///< smooth with an even extension in every variable
    double decay_radius = 0.0;  ///< beyond this radius |f| < 1e-12 relative to its peak

    bool has_space() const { return static_cast<bool>(space); }
    bool has_spectrum() const { return static_cast<bool>(spectrum); }
};

/// exp(-lambda |x|^2 / 2).
CorpusItem gaussian_item(const WeightVector& weight, double lambda);
/// |x|^2 exp(-|x|^2 / 2).
CorpusItem gaussian_moment_item(const WeightVector& weight);
/// prod_i exp(-x_i); not smooth as an even function.
CorpusItem exp_product_item(const WeightVector& weight);
/// G_{a,nu} * exp(-lambda|x|^2/2), given by its spectrum.
CorpusItem potential_gaussian_item(const WeightVector& weight, double nu, double lambda = 1.0);
/// prod_i j_{alpha_i}(xi0 x_i) exp(-|x|^2 / (2 sigma^2)): spectrum concentrated near |xi| = xi0 sqrt(n).
CorpusItem windowed_packet_item(const WeightVector& weight, double xi0, double sigma);
/// |x|^{2-N} chi(|x|/width) with a smooth cutoff chi (N = n + |a| > 2); singular at 0.
CorpusItem fundamental_item(const WeightVector& weight, double width);

/// Named selections: "gaussians", "smooth", "equivalence", "all".
std::vector<CorpusItem> standard_corpus(const WeightVector& weight, const std::string& selector);

/// Samples f(lambda x) on the plan's space grid, by the space closed form when present
/// and otherwise through the inverse transform of lambda^{-N} F(xi / lambda).
GridFunction realize(const CorpusItem& item, const HankelPlan& plan, double dilation = 1.0);

}  // namespace bh
