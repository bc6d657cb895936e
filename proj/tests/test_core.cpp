#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bh/core.hpp"
#include "bh/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace bh;

namespace {

// Midpoint rule on [0, pi/2] for the quarter circle with Theta = (cos, sin).
double quarter_circle_integral(double a1, double a2) {
    const int n = 400000;
    const double h = 0.5 * std::numbers::pi / n;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double th = (k + 0.5) * h;
        sum += std::pow(std::cos(th), a1) * std::pow(std::sin(th), a2);
    }
    return sum * h;
}

}  // namespace

TEST_CASE("weight vector derived quantities") {
    const WeightVector w({1.0, 2.0});
    CHECK(w.dim() == 2);
    CHECK(w.alpha(0) == doctest::Approx(0.0));
    CHECK(w.alpha(1) == doctest::Approx(0.5));
    CHECK(w.homogeneous_dim() == doctest::Approx(5.0));
    CHECK(w.lambda() == doctest::Approx(1.5));
    CHECK(WeightVector({1.0}).sphere_measure() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(WeightVector({1.0, 1.0}).sphere_measure() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(WeightVector({0.5, 1.5}).sphere_measure() == doctest::Approx(quarter_circle_integral(0.5, 1.5)).epsilon(1e-6));
    CHECK_THROWS_AS(WeightVector({0.0}), std::invalid_argument);
    CHECK_THROWS_AS(WeightVector(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("gauss jacobi rule integrates polynomials against the weight") {
    const quad::Rule r = quad::gauss_jacobi(10, 0.3, -0.4);
    // int_{-1}^{1} (1-x)^0.3 (1+x)^-0.4 dx = 2^{0.9} B(1.3, 0.6).
    const double exact = std::pow(2.0, 0.9) * std::exp(std::lgamma(1.3) + std::lgamma(0.6) - std::lgamma(1.9));
    double sum = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) sum += r.weights[i];
    CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("axis grids integrate x^{a+k} on (0, R]") {
    for (const AxisRule rule : {AxisRule::composite, AxisRule::gauss_legendre_mapped, AxisRule::graded}) {
        for (double a : {0.5, 1.0, 2.5}) {
            const AxisGrid ax = make_axis_grid(a, 64, 5.0, rule);
            CHECK(ax.size() >= 8);
            for (int k : {0, 1, 2, 5}) {
                double sum = 0.0;
                for (std::size_t i = 0; i < ax.size(); ++i) sum += ax.weights[i] * std::pow(ax.nodes[i], k);
                const double exact = std::pow(5.0, a + k + 1) / (a + k + 1);
                CHECK(sum == doctest::Approx(exact).epsilon(1e-12));
            }
            for (double x : ax.nodes) {
                CHECK(x > 0.0);
                CHECK(x <= 5.0);
            }
        }
    }
    CHECK_THROWS_AS(make_axis_grid(1.0, 4, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(make_axis_grid(1.0, 64, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_axis_grid(0.0, 64, 5.0), std::invalid_argument);
}

TEST_CASE("weighted norms of a Gaussian") {
    // ||exp(-x^2/2)||_2^2 = int exp(-x^2) x dx = 1/2 for a = 1.
    const GridPtr g = make_grid(WeightVector({1.0}), 128, 12.0);
    const GridFunction f = GridFunction::sample(g, [](std::span<const double> x) { return std::exp(-0.5 * x[0] * x[0]); });
    CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    // ||.||_1 = int exp(-x^2/2) x dx = 1.
    CHECK(lp_norm(f, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) <= 1.0);
    CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) > 0.99);
    CHECK(inner_product(f, f) == doctest::Approx(0.5).epsilon(1e-12));
    // Two dimensions, a = (1, 1): (int exp(-x^2) x dx)^2 = 1/4.
    const GridPtr g2 = make_grid(WeightVector({1.0, 1.0}), 64, 10.0);
    const GridFunction f2 = GridFunction::sample(g2, [](std::span<const double> x) {
        return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1]));
    });
    CHECK(lp_norm(f2, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("grid function arithmetic and grid identity") {
    const GridPtr g = make_grid(WeightVector({1.0}), 32, 4.0);
    const GridFunction one = GridFunction::sample(g, [](std::span<const double>) { return 1.0; });
    GridFunction two = one + one;
    CHECK(sup_distance(two, 2.0 * one) == 0.0);
    two -= one;
    CHECK(sup_distance(two, one) == 0.0);
    const GridPtr other = make_grid(WeightVector({1.0}), 32, 5.0);
    const GridFunction z = GridFunction::zeros(other);
    CHECK_THROWS_AS(one + z, std::invalid_argument);
    CHECK(same_grid(*g, *make_grid(WeightVector({1.0}), 32, 4.0)));
    CHECK_FALSE(same_grid(*g, *other));
    std::vector<double> pt = g->point(3);
    CHECK(pt.size() == 1);
    CHECK(g->radius(3) == doctest::Approx(pt[0]));
}

TEST_CASE("sphere rule") {
    const WeightVector w1({1.0});
    const auto s1 = sphere_rule(w1, 8);
    REQUIRE(s1.size() == 1);
    CHECK(s1[0].direction[0] == doctest::Approx(1.0));
    const WeightVector w2({0.5, 1.5});
    const auto s2 = sphere_rule(w2, 10);
    double total = 0.0;
    double moment = 0.0;
    for (const auto& node : s2) {
        const double norm = std::hypot(node.direction[0], node.direction[1]);
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(node.direction[0] > 0.0);
        CHECK(node.direction[1] > 0.0);
        total += node.weight;
        moment += node.weight * node.direction[0] * node.direction[0];
    }
    CHECK(total == doctest::Approx(quarter_circle_integral(0.5, 1.5)).epsilon(1e-6));
    CHECK(moment == doctest::Approx(quarter_circle_integral(2.5, 1.5)).epsilon(1e-6));
    CHECK_THROWS_AS(sphere_rule(w2, 2), std::invalid_argument);
}

TEST_CASE("radial profile norms") {
    // ||exp(-r^2/2)||_2^2 over R^2_+ with a = (1, 1): |S| int exp(-r^2) r^3 dr = 1/2 * 1/2.
    const WeightVector w({1.0, 1.0});
    const AxisGrid r = make_radial_axis(w, 128, 12.0);
    const RadialProfile phi = RadialProfile::sample(w, r, [](double x) { return std::exp(-0.5 * x * x); });
    CHECK(radial_lp_norm(phi, 2.0) == doctest::Approx(0.5).epsilon(1e-10));
}
