#include "bh/hankel.hpp"

#include "bh/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace bh {

SpectralFunction::SpectralFunction(GridPtr freq, std::vector<double> values)
    : freq_(std::move(freq)), values_(std::move(values)) {
    if (!freq_) throw std::invalid_argument("SpectralFunction: null grid");
    if (values_.size() != freq_->size()) throw std::invalid_argument("SpectralFunction: shape mismatch");
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("SpectralFunction: non-finite value");
    }
}

SpectralFunction& SpectralFunction::operator+=(const SpectralFunction& other) {
    if (!same_grid(*freq_, *other.freq_)) throw std::invalid_argument("SpectralFunction: grid mismatch");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

SpectralFunction& SpectralFunction::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

Multiplier Multiplier::radial(std::function<double(double)> profile, std::string label) {
    return Multiplier{[profile = std::move(profile)](std::span<const double> xi) {
                          double r2 = 0.0;
                          for (double c : xi) r2 += c * c;
                          return profile(std::sqrt(r2));
                      },
                      std::move(label)};
}

Multiplier Multiplier::identity() {
    return Multiplier{[](std::span<const double>) { return 1.0; }, "1"};
}

HankelPlan::HankelPlan(GridPtr space, GridPtr freq) : space_(std::move(space)), freq_(std::move(freq)) {
    if (!space_ || !freq_) throw std::invalid_argument("HankelPlan: null grid");
    if (!(space_->weight() == freq_->weight())) throw std::invalid_argument("HankelPlan: weight mismatch");
    const WeightVector& w = space_->weight();
    for (std::size_t i = 0; i < w.dim(); ++i) {
        const AxisGrid& xa = space_->axis(i);
        const AxisGrid& fa = freq_->axis(i);
        const double alpha = w.alpha(i);
        const auto mx = static_cast<Eigen::Index>(xa.size());
        const auto mf = static_cast<Eigen::Index>(fa.size());
        tensor::Matrix kernel(mf, mx);
        for (Eigen::Index k = 0; k < mf; ++k) {
            for (Eigen::Index l = 0; l < mx; ++l) kernel(k, l) = eval_j(alpha, fa.nodes[k] * xa.nodes[l]);
        }
        const double c = std::exp((1.0 - w.a(i)) * std::log(2.0) - 2.0 * std::lgamma(alpha + 1.0));
        tensor::Matrix fwd(mf, mx);
        tensor::Matrix inv(mx, mf);
        for (Eigen::Index k = 0; k < mf; ++k) {
            for (Eigen::Index l = 0; l < mx; ++l) {
                fwd(k, l) = kernel(k, l) * xa.weights[l];
                inv(l, k) = c * kernel(k, l) * fa.weights[k];
            }
        }
        forward_.push_back(std::move(fwd));
        inverse_.push_back(std::move(inv));
        inverse_constant_.push_back(c);
    }
}

tensor::Matrix HankelPlan::evaluation_matrix(std::size_t axis, std::span<const double> points) const {
    const AxisGrid& fa = freq_->axis(axis);
    const double alpha = weight().alpha(axis);
    const double c = inverse_constant_[axis];
    tensor::Matrix out(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(fa.size()));
    for (std::size_t p = 0; p < points.size(); ++p) {
        for (std::size_t k = 0; k < fa.size(); ++k) {
            out(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(k)) =
                c * eval_j(alpha, points[p] * fa.nodes[k]) * fa.weights[k];
        }
    }
    return out;
}

HankelPlanPtr make_hankel_plan(GridPtr space, GridPtr freq) {
    return std::make_shared<const HankelPlan>(std::move(space), std::move(freq));
}

HankelPlanPtr make_hankel_plan(const WeightVector& weight, std::size_t M, double R, double Xi,
                               AxisRule rule) {
    return make_hankel_plan(make_grid(weight, M, R, rule), make_grid(weight, M, Xi, rule));
}

SpectralFunction hankel_forward(const HankelPlan& plan, const GridFunction& f) {
    if (!same_grid(f.grid(), *plan.space())) throw std::invalid_argument("hankel_forward: grid mismatch");
    std::vector<double> values = f.values();
    std::vector<std::size_t> shape = plan.space()->shape();
    for (std::size_t i = 0; i < plan.dim(); ++i) {
        values = tensor::apply_along_axis(values, shape, i, plan.forward(i));
        shape[i] = plan.freq()->shape()[i];
    }
    return SpectralFunction(plan.freq(), std::move(values));
}

GridFunction hankel_inverse(const HankelPlan& plan, const SpectralFunction& F) {
    if (!same_grid(F.grid(), *plan.freq())) throw std::invalid_argument("hankel_inverse: grid mismatch");
    std::vector<double> values = F.values();
    std::vector<std::size_t> shape = plan.freq()->shape();
    for (std::size_t i = 0; i < plan.dim(); ++i) {
        values = tensor::apply_along_axis(values, shape, i, plan.inverse(i));
        shape[i] = plan.space()->shape()[i];
    }
    return GridFunction(plan.space(), std::move(values));
}

std::vector<double> radial_hankel_values(const RadialProfile& phi, std::span<const double> xi) {
    const double lambda = phi.weight().lambda();
    const double surface = phi.weight().sphere_measure();
    const AxisGrid& r = phi.radial();
    std::vector<double> out(xi.size(), 0.0);
    for (std::size_t q = 0; q < xi.size(); ++q) {
        double sum = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            sum += phi.values()[k] * eval_j(lambda, xi[q] * r.nodes[k]) * r.weights[k];
        }
        out[q] = surface * sum;
    }
    return out;
}

RadialProfile radial_hankel(const RadialProfile& phi, const AxisGrid& xi_axis) {
    return RadialProfile(phi.weight(), xi_axis, radial_hankel_values(phi, xi_axis.nodes));
}

SpectralFunction apply_multiplier(const SpectralFunction& F, const Multiplier& m) {
    const Grid& g = F.grid();
    std::vector<double> values(F.size());
    std::vector<double> xi(g.dim());
    for (std::size_t k = 0; k < values.size(); ++k) {
        g.point(k, xi);
        const double s = m.symbol(xi);
        if (!std::isfinite(s)) {
            throw std::invalid_argument("apply_multiplier: symbol '" + m.label + "' is not finite");
        }
        values[k] = s * F[k];
    }
    return SpectralFunction(F.grid_ptr(), std::move(values));
}

GridFunction apply_symbol(const HankelPlan& plan, const GridFunction& f, const Multiplier& m) {
    return hankel_inverse(plan, apply_multiplier(hankel_forward(plan, f), m));
}

GridFunction bessel_convolve(const HankelPlan& plan, const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g, "bessel_convolve");
    const SpectralFunction F = hankel_forward(plan, f);
    const SpectralFunction G = hankel_forward(plan, g);
    std::vector<double> prod(F.size());
    for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = F[k] * G[k];
    return hankel_inverse(plan, SpectralFunction(plan.freq(), std::move(prod)));
}

double evaluate_at(const HankelPlan& plan, const SpectralFunction& F, std::span<const double> x) {
    if (x.size() != plan.dim()) throw std::invalid_argument("evaluate_at: dimension mismatch");
    std::vector<double> values = F.values();
    std::vector<std::size_t> shape = plan.freq()->shape();
    for (std::size_t i = 0; i < plan.dim(); ++i) {
        const double xi = x[i];
        values = tensor::apply_along_axis(values, shape, i,
                                          plan.evaluation_matrix(i, std::span<const double>(&xi, 1)));
        shape[i] = 1;
    }
    return values[0];
}

double spectral_inner_product(const HankelPlan& plan, const SpectralFunction& F,
                              const SpectralFunction& G) {
    double c = 1.0;
    for (std::size_t i = 0; i < plan.dim(); ++i) c *= plan.inverse_constant(i);
    const Grid& g = F.grid();
    double sum = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) sum += F[k] * G[k] * g.quad_weight(k);
    return c * sum;
}

SpectralFunction sample_spectrum(const HankelPlan& plan,
                                 const std::function<double(std::span<const double>)>& spectrum) {
    const Grid& g = *plan.freq();
    std::vector<double> values(g.size());
    std::vector<double> xi(g.dim());
    for (std::size_t k = 0; k < values.size(); ++k) {
        g.point(k, xi);
        values[k] = spectrum(xi);
    }
    return SpectralFunction(plan.freq(), std::move(values));
}

}  // namespace bh
