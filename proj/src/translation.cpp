#include "bh/translation.hpp"

#include "bh/parallel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bh {

namespace {

constexpr int kStencil = 8;
constexpr std::size_t kCacheBudgetBytes = std::size_t{96} << 20;

std::array<double, kStencil> lagrange_weights(double s, int first) {
    std::array<double, kStencil> w{};
    for (int m = 0; m < kStencil; ++m) {
        double num = 1.0;
        double den = 1.0;
        for (int k = 0; k < kStencil; ++k) {
            if (k == m) continue;
            num *= s - static_cast<double>(first + k);
            den *= static_cast<double>(m - k);
        }
        w[m] = num / den;
    }
    return w;
}

}  // namespace

TranslationPlan::TranslationPlan(HankelPlanPtr hankel, TranslationOptions options)
    : hankel_(std::move(hankel)), options_(options) {
    if (!hankel_) throw std::invalid_argument("TranslationPlan: null Hankel plan");
    if (options_.theta_nodes < 4) throw std::invalid_argument("TranslationPlan: theta_nodes < 4");
    if (!(options_.oversampling >= 1.0)) throw std::invalid_argument("TranslationPlan: oversampling < 1");
    const WeightVector& w = weight();
    for (std::size_t i = 0; i < w.dim(); ++i) {
        const double alpha = w.alpha(i);
        quad::Rule rule = quad::gauss_jacobi(options_.theta_nodes, alpha - 0.5, alpha - 0.5);
        const double c = std::exp(std::lgamma(alpha + 1.0) - std::lgamma(alpha + 0.5)) /
                         std::sqrt(std::numbers::pi);
        for (double& wq : rule.weights) wq *= c;
        theta_.push_back(std::move(rule));

        const double R = hankel_->space()->axis(i).cutoff;
        const double Xi = hankel_->freq()->axis(i).cutoff;
        const auto nf = static_cast<std::size_t>(
            std::max(512.0, std::ceil(options_.oversampling * R * Xi)));
        const double h = R / static_cast<double>(nf);
        std::vector<double> fine(nf + kStencil + 1);
        for (std::size_t k = 0; k < fine.size(); ++k) fine[k] = h * static_cast<double>(k);
        resample_.push_back(hankel_->evaluation_matrix(i, fine) * hankel_->forward(i));
        step_.push_back(h);
    }
    sphere_ = sphere_rule(w, std::max<std::size_t>(4, options_.sphere_nodes));
    for (std::size_t i = 0; i < w.dim(); ++i) reconstruct_.push_back(build_matrix(i, 0.0));
}

tensor::Matrix TranslationPlan::build_matrix(std::size_t axis, double t) const {
    const AxisGrid& xa = hankel_->space()->axis(axis);
    const auto m = static_cast<Eigen::Index>(xa.size());
    tensor::Matrix out = tensor::Matrix::Zero(m, m);
    const tensor::Matrix& rs = resample_[axis];
    const double h = step_[axis];
    const double R = xa.cutoff;
    const quad::Rule& rule = theta_[axis];
    for (Eigen::Index j = 0; j < m; ++j) {
        const double x = xa.nodes[static_cast<std::size_t>(j)];
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double d2 = x * x + t * t - 2.0 * x * t * rule.nodes[q];
            const double d = std::sqrt(std::max(0.0, d2));
            if (d > R) continue;
            const double s = d / h;
            const int first = static_cast<int>(std::floor(s)) - kStencil / 2 + 1;
            const auto lw = lagrange_weights(s, first);
            for (int k = 0; k < kStencil; ++k) {
                const int idx = std::abs(first + k);
                out.row(j) += (rule.weights[q] * lw[k]) * rs.row(idx);
            }
        }
    }
    return out;
}

std::shared_ptr<const tensor::Matrix> TranslationPlan::axis_matrix(std::size_t axis, double t) const {
    if (axis >= weight().dim()) throw std::out_of_range("axis_matrix: axis out of range");
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("axis_matrix: t must be finite and >= 0");
    const auto key = std::make_pair(axis, t);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }

    const auto m = static_cast<Eigen::Index>(hankel_->space()->axis(axis).size());
    auto out = t == 0.0 ? std::make_shared<const tensor::Matrix>(tensor::Matrix::Identity(m, m))
                        : std::make_shared<const tensor::Matrix>(build_matrix(axis, t));

    std::lock_guard<std::mutex> lock(cache_mutex_);
    const std::size_t bytes = static_cast<std::size_t>(m * m) * sizeof(double);
    if (cache_bytes_ + bytes > kCacheBudgetBytes) {
        cache_.clear();
        cache_bytes_ = 0;
    }
    auto [it, inserted] = cache_.emplace(key, out);
    if (inserted) cache_bytes_ += bytes;
    return it->second;
}

TranslationPlanPtr make_translation_plan(HankelPlanPtr hankel, TranslationOptions options) {
    return std::make_shared<const TranslationPlan>(std::move(hankel), options);
}

GridFunction translate(const TranslationPlan& plan, const GridFunction& f, std::span<const double> t) {
    if (!same_grid(f.grid(), *plan.hankel().space())) throw std::invalid_argument("translate: grid mismatch");
    if (t.size() != f.grid().dim()) throw std::invalid_argument("translate: dimension mismatch");
    std::vector<double> values = f.values();
    const std::vector<std::size_t>& shape = f.grid().shape();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 0.0) throw std::invalid_argument("translate: t must lie in the closed orthant");
        if (t[i] == 0.0) continue;
        values = tensor::apply_along_axis(values, shape, i, *plan.axis_matrix(i, t[i]));
    }
    return GridFunction(f.grid_ptr(), std::move(values), f.symmetry());
}

GridFunction reconstruct(const TranslationPlan& plan, const GridFunction& f) {
    if (!same_grid(f.grid(), *plan.hankel().space())) throw std::invalid_argument("reconstruct: grid mismatch");
    std::vector<double> values = f.values();
    for (std::size_t i = 0; i < f.grid().dim(); ++i) {
        values = tensor::apply_along_axis(values, f.grid().shape(), i, plan.reconstruction_matrix(i));
    }
    return GridFunction(f.grid_ptr(), std::move(values), f.symmetry());
}

GridFunction translate(const TranslationPlan& plan, const GridFunction& f, double t) {
    return translate(plan, f, std::span<const double>(&t, 1));
}

GridFunction spherical_translate(const TranslationPlan& plan, const GridFunction& f, double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("spherical_translate: r must be >= 0");
    const auto& nodes = plan.sphere();
    std::vector<std::vector<double>> parts(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t q) {
        std::vector<double> shift(nodes[q].direction);
        for (double& c : shift) c *= r;
        parts[q] = translate(plan, f, shift).values();
    });
    std::vector<double> sum(f.size(), 0.0);
    double total = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        total += nodes[q].weight;
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += nodes[q].weight * parts[q][k];
    }
    for (double& v : sum) v /= total;
    return GridFunction(f.grid_ptr(), std::move(sum), f.symmetry());
}

}  // namespace bh
