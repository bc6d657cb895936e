#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bh/hankel.hpp"
#include "bh/specfun.hpp"

#include <cmath>

using namespace bh;

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

// Transform of exp(-lambda |x|^2 / 2): prod 2^{alpha} Gamma(alpha+1) lambda^{-(alpha+1)} exp(-|xi|^2/(2 lambda)).
double gaussian_spectrum(const WeightVector& w, double lambda, std::span<const double> xi) {
    double c = 1.0;
    for (std::size_t i = 0; i < w.dim(); ++i) {
        const double al = w.alpha(i);
        c *= std::pow(2.0, al) * std::tgamma(al + 1.0) * std::pow(lambda, -(al + 1.0));
    }
    return c * std::exp(-0.5 * norm2(xi) / lambda);
}

GridFunction gaussian(const HankelPlan& plan, double lambda) {
    return GridFunction::sample(plan.space(), [lambda](std::span<const double> x) { return std::exp(-0.5 * lambda * norm2(x)); });
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_CASE("forward transform of Gaussians matches the closed form") {
    for (const auto& a : {std::vector<double>{1.0}, std::vector<double>{0.5, 1.5}}) {
        const WeightVector w(a);
        const auto plan = make_hankel_plan(w, 128, 12.0, 12.0);
        for (double lambda : {0.5, 1.0, 3.0}) {
            const SpectralFunction F = hankel_forward(*plan, gaussian(*plan, lambda));
            std::vector<double> xi(w.dim());
            double err = 0.0;
            for (std::size_t k = 0; k < F.size(); ++k) {
                F.grid().point(k, xi);
                err = std::max(err, std::abs(F[k] - gaussian_spectrum(w, lambda, xi)));
            }
            CHECK(err <= 1e-8 * std::max(1.0, max_abs(F.values())));
        }
    }
}

TEST_CASE("round trip and Parseval") {
    const WeightVector w({1.0});
    const auto plan = make_hankel_plan(w, 256, 12.0, 12.0);
    const GridFunction f = gaussian(*plan, 1.0);
    const SpectralFunction F = hankel_forward(*plan, f);
    const GridFunction back = hankel_inverse(*plan, F);
    CHECK(sup_distance(back, f) <= 1e-10);
    CHECK(spectral_inner_product(*plan, F, F) == doctest::Approx(inner_product(f, f)).epsilon(1e-10));
    const auto plan2 = make_hankel_plan(WeightVector({0.5, 1.5}), 128, 12.0, 12.0);
    const GridFunction f2 = gaussian(*plan2, 1.0);
    CHECK(sup_distance(hankel_inverse(*plan2, hankel_forward(*plan2, f2)), f2) <= 1e-5);
}

TEST_CASE("multipliers and the convolution theorem") {
    const WeightVector w({2.0});
    const auto plan = make_hankel_plan(w, 128, 12.0, 12.0);
    const GridFunction f = gaussian(*plan, 1.0);
    CHECK(sup_distance(apply_symbol(*plan, f, Multiplier::identity()), f) <= 1e-7);
    // Gaussian * Gaussian: spectra multiply; the product is the transform of c exp(-|x|^2/4).
    const GridFunction conv = bessel_convolve(*plan, f, f);
    const double c = gaussian_spectrum(w, 1.0, std::vector<double>{0.0});
    const double c_half = gaussian_spectrum(w, 0.5, std::vector<double>{0.0});
    double err = 0.0;
    std::vector<double> x(1);
    for (std::size_t k = 0; k < conv.size(); ++k) {
        plan->space()->point(k, x);
        const double ref = c * c / c_half * std::exp(-0.25 * x[0] * x[0]);
        err = std::max(err, std::abs(conv[k] - ref));
    }
    CHECK(err <= 1e-6);
    const GridFunction other = GridFunction::zeros(make_grid(w, 64, 12.0));
    CHECK_THROWS_AS(bessel_convolve(*plan, f, other), std::invalid_argument);
    const Multiplier bad{[](std::span<const double>) { return std::nan(""); }, "nan"};
    CHECK_THROWS_AS(apply_symbol(*plan, f, bad), std::invalid_argument);
}

TEST_CASE("band-limited evaluation off the grid") {
    const WeightVector w({1.0, 1.0});
    const auto plan = make_hankel_plan(w, 128, 12.0, 12.0);
    const SpectralFunction F = sample_spectrum(*plan, [&](std::span<const double> xi) { return gaussian_spectrum(w, 1.0, xi); });
    for (const auto& x : {std::vector<double>{0.37, 1.21}, std::vector<double>{2.5, 0.05}}) {
        CHECK(evaluate_at(*plan, F, x) == doctest::Approx(std::exp(-0.5 * norm2(x))).epsilon(1e-6));
    }
}

TEST_CASE("radial transform") {
    const WeightVector w({1.0, 2.0});
    const AxisGrid r = make_radial_axis(w, 256, 14.0);
    const RadialProfile phi = RadialProfile::sample(w, r, [](double t) { return std::exp(-0.5 * t * t); });
    const std::vector<double> xi{0.0, 0.5, 1.7, 4.0};
    const auto v = radial_hankel_values(phi, xi);
    for (std::size_t i = 0; i < xi.size(); ++i) {
        CHECK(v[i] == doctest::Approx(gaussian_spectrum(w, 1.0, std::vector<double>{xi[i], 0.0})).epsilon(1e-9));
    }
}
