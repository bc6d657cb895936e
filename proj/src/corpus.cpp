#include "bh/corpus.hpp"

#include "bh/kfunc.hpp"
#include "bh/specfun.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bh {

namespace {

double norm2(std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return r2;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Hankel transform of exp(-lambda|x|^2/2): prod_i 2^{alpha_i} Gamma(alpha_i+1) lambda^{-(alpha_i+1)} exp(-|xi|^2/(2 lambda)).
double gaussian_transform_constant(const WeightVector& w, double lambda) {
    double logc = 0.0;
    for (std::size_t i = 0; i < w.dim(); ++i) {
        const double al = w.alpha(i);
        logc += al * std::log(2.0) + std::lgamma(al + 1.0) - (al + 1.0) * std::log(lambda);
    }
    return std::exp(logc);
}

}  // namespace

CorpusItem gaussian_item(const WeightVector& weight, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("gaussian_item: lambda must be positive");
    const double c = gaussian_transform_constant(weight, lambda);
    return CorpusItem{
        "gauss_" + fmt(lambda),
        [lambda](std::span<const double> x) { return std::exp(-0.5 * lambda * norm2(x)); },
        [lambda, c](std::span<const double> xi) { return c * std::exp(-0.5 * norm2(xi) / lambda); },
        true,
        std::sqrt(2.0 * 12.0 * std::log(10.0) / lambda)};
}

CorpusItem gaussian_moment_item(const WeightVector& weight) {
    const double c = gaussian_transform_constant(weight, 1.0);
    const double N = weight.homogeneous_dim();
    // |x|^2 g = Delta_a g + N g for g = exp(-|x|^2/2).
    return CorpusItem{
        "gauss_moment",
        [](std::span<const double> x) {
            const double r2 = norm2(x);
            return r2 * std::exp(-0.5 * r2);
        },
        [c, N](std::span<const double> xi) {
            const double r2 = norm2(xi);
            return c * (N - r2) * std::exp(-0.5 * r2);
        },
        true, 8.5};
}

CorpusItem exp_product_item(const WeightVector& weight) {
    WeightVector w = weight;
    return CorpusItem{
        "exp_product",
        [](std::span<const double> x) {
            double s = 0.0;
            for (double c : x) s += c;
            return std::exp(-s);
        },
        [w](std::span<const double> xi) {
            double v = 1.0;
            for (std::size_t i = 0; i < w.dim(); ++i) {
                v *= std::tgamma(w.a(i) + 1.0) * std::pow(1.0 + xi[i] * xi[i], -0.5 * (w.a(i) + 2.0));
            }
            return v;
        },
        false, 12.0 * std::log(10.0)};
}

CorpusItem potential_gaussian_item(const WeightVector& weight, double nu, double lambda) {
    if (!(nu > 0.0)) throw std::invalid_argument("potential_gaussian_item: nu must be positive");
    const CorpusItem g = gaussian_item(weight, lambda);
    auto spec = g.spectrum;
    return CorpusItem{"potential_" + fmt(nu) + "_gauss_" + fmt(lambda),
                      {},
                      [spec, nu](std::span<const double> xi) {
                          return std::pow(1.0 + norm2(xi), -0.5 * nu) * spec(xi);
                      },
                      true,
                      // G_{a,nu} decays like exp(-r); 1e-12 is reached near r = 28 + N.
                      28.0 + weight.homogeneous_dim()};
}

CorpusItem windowed_packet_item(const WeightVector& weight, double xi0, double sigma) {
    if (!(xi0 >= 0.0 && sigma > 0.0)) throw std::invalid_argument("windowed_packet_item: bad parameters");
    WeightVector w = weight;
    return CorpusItem{"packet_" + fmt(xi0) + "_" + fmt(sigma),
                      [w, xi0, sigma](std::span<const double> x) {
                          double v = std::exp(-0.5 * norm2(x) / (sigma * sigma));
                          for (std::size_t i = 0; i < x.size(); ++i) v *= eval_j(w.alpha(i), xi0 * x[i]);
                          return v;
                      },
                      {},
                      true,
                      sigma * std::sqrt(2.0 * 12.0 * std::log(10.0))};
}

CorpusItem fundamental_item(const WeightVector& weight, double width) {
    const double N = weight.homogeneous_dim();
    if (!(N > 2.0)) throw std::invalid_argument("fundamental_item: needs n + |a| > 2");
    if (!(width > 0.0)) throw std::invalid_argument("fundamental_item: width must be positive");
    return CorpusItem{"fundamental_" + fmt(width),
                      [N, width](std::span<const double> x) {
                          const double r = std::sqrt(norm2(x));
                          return std::pow(r, 2.0 - N) * eta_cutoff(r / width);
                      },
                      {},
                      false,
                      2.0 * width};
}

std::vector<CorpusItem> standard_corpus(const WeightVector& weight, const std::string& selector) {
    std::vector<CorpusItem> out;
    const auto gaussians = [&] {
        for (double l : {0.5, 1.0, 2.0, 4.0}) out.push_back(gaussian_item(weight, l));
    };
    if (selector == "gaussians") {
        gaussians();
    } else if (selector == "equivalence") {
        gaussians();
        out.push_back(gaussian_moment_item(weight));
        out.push_back(windowed_packet_item(weight, 2.0, 1.5));
    } else if (selector == "smooth") {
        gaussians();
        out.push_back(gaussian_moment_item(weight));
        out.push_back(windowed_packet_item(weight, 2.0, 1.5));
        out.push_back(potential_gaussian_item(weight, 1.5));
    } else if (selector == "all") {
        gaussians();
        out.push_back(gaussian_moment_item(weight));
        out.push_back(windowed_packet_item(weight, 2.0, 1.5));
        out.push_back(potential_gaussian_item(weight, 1.5));
        out.push_back(exp_product_item(weight));
    } else {
        throw std::invalid_argument("standard_corpus: unknown selector '" + selector + "'");
    }
    return out;
}

GridFunction realize(const CorpusItem& item, const HankelPlan& plan, double dilation) {
    if (!(dilation > 0.0)) throw std::invalid_argument("realize: dilation must be positive");
    if (item.has_space()) {
        std::vector<double> y;
        return GridFunction::sample(plan.space(), [&](std::span<const double> x) {
            y.assign(x.begin(), x.end());
            for (double& c : y) c *= dilation;
            return item.space(y);
        });
    }
    if (!item.has_spectrum()) throw std::invalid_argument("realize: item has no evaluator");
    const double scale = std::pow(dilation, -plan.weight().homogeneous_dim());
    std::vector<double> eta;
    const SpectralFunction F = sample_spectrum(plan, [&](std::span<const double> xi) {
        eta.assign(xi.begin(), xi.end());
        for (double& c : eta) c /= dilation;
        return scale * item.spectrum(eta);
    });
    return hankel_inverse(plan, F);
}

}  // namespace bh
