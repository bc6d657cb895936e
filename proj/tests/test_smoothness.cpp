#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bh/hankel.hpp"
#include "bh/smoothness.hpp"
#include "bh/specfun.hpp"
#include "bh/translation.hpp"

#include <cmath>
#include <limits>

using namespace bh;

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

struct Setup {
    HankelPlanPtr hp;
    TranslationPlanPtr plan;
    GridFunction f;
};

Setup setup(std::vector<double> a, std::size_t M = 128) {
    auto hp = make_hankel_plan(WeightVector(a), M, 12.0, 12.0);
    auto plan = make_translation_plan(hp);
    GridFunction f = GridFunction::sample(hp->space(), [](std::span<const double> x) { return std::exp(-0.5 * norm2(x)); });
    return {hp, plan, f};
}

// max_k |G_k - symbol(xi_k) F_k| relative to max |F|.
template <class Symbol>
double spectral_error(const HankelPlan& hp, const GridFunction& f, const GridFunction& g, Symbol symbol) {
    const SpectralFunction F = hankel_forward(hp, f);
    const SpectralFunction G = hankel_forward(hp, g);
    std::vector<double> xi(hp.dim());
    double err = 0.0;
    double peak = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) {
        F.grid().point(k, xi);
        err = std::max(err, std::abs(G[k] - symbol(xi) * F[k]));
        peak = std::max(peak, std::abs(F[k]));
    }
    return err / peak;
}

// int_0^inf (1 - J_0(u))^2 u^{-2s-1} du: Simpson in log u on (e^-30, U], exact tail of the constant term beyond U.
double bessel_gap_integral(double s) {
    const double U = 4000.0;
    const double lo = -30.0;
    const double hi = std::log(U);
    const int n = 400000;
    const double h = (hi - lo) / n;
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double u = std::exp(lo + h * k);
        const double g = 1.0 - std::cyl_bessel_j(0.0, u);
        const double v = g * g * std::pow(u, -2.0 * s);
        sum += v * (k == 0 || k == n ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0));
    }
    return sum * h / 3.0 + std::pow(U, -2.0 * s) / (2.0 * s);
}

}  // namespace

TEST_CASE("script J against its definition") {
    for (double x : {0.0, 0.3, 1.7, 6.0, 25.0}) {
        CHECK(script_J(-0.5, 1, x) == doctest::Approx(1.0 - std::cos(x)).epsilon(1e-12).scale(1.0));
        CHECK(script_J(-0.5, 3, x) ==
              doctest::Approx(1.0 - 3.0 * std::cos(x) + 3.0 * std::cos(std::sqrt(2.0) * x) - std::cos(std::sqrt(3.0) * x)).epsilon(1e-12).scale(1.0));
        const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
        CHECK(script_J(0.5, 1, x) == doctest::Approx(1.0 - sinc).epsilon(1e-12).scale(1.0));
    }
    CHECK(script_J(0.0, 2, 1e-3) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
}

TEST_CASE("difference orders") {
    CHECK_THROWS_AS(DifferenceOrder(0), std::invalid_argument);
    CHECK_THROWS_AS(DifferenceOrder(4), std::invalid_argument);
    CHECK(DifferenceOrder(3).m == 3);
}

TEST_CASE("differences act as spectral multipliers") {
    const Setup s = setup({1.0});
    for (int m : {1, 2, 3}) {
        const double y = 0.7;
        const GridFunction d = difference(*s.plan, s.f, std::span<const double>(&y, 1), DifferenceOrder(m));
        CHECK(spectral_error(*s.hp, s.f, d, [&](std::span<const double> xi) {
                  return std::pow(1.0 - std::cyl_bessel_j(0.0, y * xi[0]), m);
              }) <= 1e-6);
    }
    const double y = 1.2;
    const GridFunction td = tilde_difference(*s.plan, s.f, std::span<const double>(&y, 1), 2);
    CHECK(spectral_error(*s.hp, s.f, td, [&](std::span<const double> xi) {
              return 1.0 - 2.0 * std::cyl_bessel_j(0.0, y * xi[0]) + std::cyl_bessel_j(0.0, std::sqrt(2.0) * y * xi[0]);
          }) <= 1e-6);
    const double zero = 0.0;
    CHECK(lp_norm(difference(*s.plan, s.f, std::span<const double>(&zero, 1), DifferenceOrder(1)), 2.0) <= 1e-12);
}

TEST_CASE("spherical difference in two dimensions") {
    const Setup s = setup({1.0, 2.0});
    // lambda = (2 + 3) / 2 - 1 = 3/2, so j_lambda(z) = 3 (sin z - z cos z) / z^3.
    const auto j32 = [](double z) { return z < 1e-4 ? 1.0 - z * z / 10.0 : 3.0 * (std::sin(z) - z * std::cos(z)) / (z * z * z); };
    const double r = 0.6;
    const GridFunction d = spherical_difference(*s.plan, s.f, r, DifferenceOrder(2));
    CHECK(spectral_error(*s.hp, s.f, d, [&](std::span<const double> xi) {
              const double g = 1.0 - j32(r * std::sqrt(norm2(xi)));
              return g * g;
          }) <= 1e-6);
    CHECK_THROWS_AS(spherical_difference(*s.plan, s.f, -1.0, DifferenceOrder(1)), std::invalid_argument);
}

TEST_CASE("modulus bounds, monotonicity and subadditivity") {
    const Setup s = setup({1.0});
    const GridFunction g = GridFunction::sample(s.hp->space(), [](std::span<const double> x) { return x[0] * x[0] * std::exp(-x[0] * x[0]); });
    const std::vector<double> t{0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0};
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
        for (int m : {1, 2}) {
            const auto rf = modulus(*s.plan, s.f, DifferenceOrder(m), p, t);
            const auto rg = modulus(*s.plan, g, DifferenceOrder(m), p, t);
            const auto rs = modulus(*s.plan, s.f + g, DifferenceOrder(m), p, t);
            for (std::size_t k = 0; k < t.size(); ++k) {
                CHECK(rf.omega_values[k] <= std::pow(2.0, m) * lp_norm(s.f, p) * (1.0 + 1e-12));
                CHECK(rs.omega_values[k] <= (rf.omega_values[k] + rg.omega_values[k]) * (1.0 + 1e-12));
                if (k > 0) CHECK(rf.omega_values[k] >= rf.omega_values[k - 1]);
            }
        }
    }
}

TEST_CASE("spherical seminorm of a Gaussian matches its spectral integral") {
    const Setup s = setup({1.0});
    for (double sv : {0.5, 1.2}) {
        const double ref = std::sqrt(bessel_gap_integral(sv) * 0.5 * std::tgamma(sv + 1.0));
        const SeminormResult r = gagliardo_spherical(*s.plan, s.f, sv, 2.0);
        CHECK(r.tail_converged);
        CHECK(r.value == doctest::Approx(ref).epsilon(1e-3));
    }
    CHECK_THROWS_AS(gagliardo_spherical(*s.plan, s.f, 2.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(gagliardo_spherical(*s.plan, s.f, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("Besov integral dominates the seminorm and the full norm combines both") {
    const Setup s = setup({1.0});
    for (double p : {1.5, 2.0}) {
        const double semi = gagliardo_spherical(*s.plan, s.f, 0.8, p).value;
        CHECK(besov_integral(*s.plan, s.f, 0.8, p) >= std::pow(semi, p) * (1.0 - 1e-9));
        const double full = fractional_sobolev_norm(*s.plan, s.f, 0.8, p);
        CHECK(full == doctest::Approx(std::pow(std::pow(lp_norm(s.f, p), p) + std::pow(semi, p), 1.0 / p)).epsilon(1e-12));
    }
}

TEST_CASE("weighted seminorm scales under dilation") {
    // [f(c .)] = c^{s - N/p} [f] with N = n + |a| = 2.
    const Setup s = setup({1.0});
    const GridFunction fc = GridFunction::sample(s.hp->space(), [](std::span<const double> x) { return std::exp(-2.0 * x[0] * x[0]); });
    for (double sv : {0.6, 1.4}) {
        const double base = gagliardo_weighted(*s.plan, s.f, sv, 2.0).value;
        const double scaled = gagliardo_weighted(*s.plan, fc, sv, 2.0).value;
        CHECK(scaled / base == doctest::Approx(std::pow(2.0, sv - 1.0)).epsilon(0.03));
    }
}
