#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bh/core.hpp"
#include "bh/specfun.hpp"

#include <cmath>
#include <numbers>

using namespace bh;

namespace {

// Series of j_alpha with exact rational recurrences, accumulated in long double.
long double series_oracle(long double alpha, long double z) {
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= -(z * z / 4.0L) / (k * (k + alpha));
        sum += term;
    }
    return sum;
}

}  // namespace

TEST_CASE("normalized Bessel j matches its power series") {
    for (double alpha : {-0.5, 0.0, 0.5, 1.0, 2.3}) {
        for (int k = 0; k <= 100; ++k) {
            const double z = 0.1 * k;
            CHECK(std::abs(eval_j(alpha, z) - static_cast<double>(series_oracle(alpha, z))) <= 1e-12);
        }
    }
}

TEST_CASE("closed forms of j") {
    for (int k = 0; k <= 200; ++k) {
        const double z = 0.1 * k;
        CHECK(std::abs(eval_j(-0.5, z) - std::cos(z)) <= 1e-12);
        if (z > 0.0) CHECK(std::abs(eval_j(0.5, z) - std::sin(z) / z) <= 1e-12);
    }
    CHECK(eval_j(1.7, 0.0) == 1.0);
}

TEST_CASE("j agrees with scaled cylinder functions beyond the series range") {
    for (double alpha : {0.0, 1.0, 2.3}) {
        for (double z : {12.5, 20.0, 47.3, 100.0}) {
            const double ref = std::tgamma(alpha + 1.0) * std::pow(2.0 / z, alpha) * std::cyl_bessel_j(alpha, z);
            CHECK(eval_j(alpha, z) == doctest::Approx(ref).epsilon(1e-10).scale(1e-3));
        }
    }
    for (double z = 0.0; z < 60.0; z += 0.37) CHECK(std::abs(eval_j(0.7, z)) <= 1.0);
}

TEST_CASE("derivative of j") {
    for (double alpha : {-0.5, 0.5, 2.0}) {
        for (double z : {0.3, 1.0, 4.0, 9.0}) {
            const double h = 1e-5;
            const double fd = (eval_j(alpha, z + h) - eval_j(alpha, z - h)) / (2.0 * h);
            CHECK(eval_j_deriv(alpha, z) == doctest::Approx(fd).epsilon(1e-7).scale(1e-3));
        }
    }
    CHECK(eval_j_deriv(1.0, 0.0) == 0.0);
}

TEST_CASE("modified Bessel K") {
    for (double nu : {0.0, 0.3, 0.5, 1.0, 1.75, 2.5, 4.2}) {
        for (double r : {1e-3, 0.1, 0.9, 1.99, 2.01, 5.0, 30.0}) {
            CHECK(eval_K(nu, r) == doctest::Approx(std::cyl_bessel_k(nu, r)).epsilon(1e-12));
        }
    }
    for (double r : {1e-3, 0.5, 3.0, 25.0}) {
        const double ref = std::sqrt(std::numbers::pi / (2.0 * r)) * std::exp(-r);
        CHECK(eval_K(0.5, r) == doctest::Approx(ref).epsilon(1e-12));
    }
    CHECK_THROWS_AS(eval_K(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(eval_K(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("K envelopes near zero and infinity") {
    // K_nu(r) ~ Gamma(nu) 2^{nu-1} r^{-nu} and K_nu(r) ~ sqrt(pi/(2r)) e^{-r}.
    for (double nu : {0.5, 1.0, 2.5}) {
        const double small = eval_K(nu, 1e-7) * std::pow(1e-7, nu);
        CHECK(small == doctest::Approx(std::tgamma(nu) * std::pow(2.0, nu - 1.0)).epsilon(1e-4));
        const double r = 600.0;
        const double large = eval_K(nu, r) * std::exp(r) * std::sqrt(2.0 * r / std::numbers::pi);
        CHECK(large == doctest::Approx(1.0 + (4.0 * nu * nu - 1.0) / (8.0 * r)).epsilon(1e-5));
    }
}

TEST_CASE("product kernel") {
    const WeightVector w({1.0, 2.0});
    const std::vector<double> x{0.7, 1.3};
    const std::vector<double> xi{2.0, 0.4};
    CHECK(eval_jj(w, x, xi) == doctest::Approx(eval_j(0.0, 1.4) * eval_j(0.5, 0.52)).epsilon(1e-15));
    CHECK_THROWS_AS(eval_jj(w, std::vector<double>{1.0}, xi), std::invalid_argument);
}

TEST_CASE("Bessel kernel G has unit mass") {
    // |S| int_0^inf G(r) r^{N-1} dr = 1 since its symbol is 1 at xi = 0.
    for (const auto& a : {std::vector<double>{1.0}, std::vector<double>{0.5, 1.5}}) {
        const WeightVector w(a);
        const double N = w.homogeneous_dim();
        for (double nu : {1.0, 2.5, 3.5}) {
            const KernelSpec spec{w, nu};
            // Substitution r = u^4 removes the endpoint singularity r^{nu-1}.
            const int n = 200000;
            const double umax = std::pow(60.0, 0.25);
            const double h = umax / n;
            double sum = 0.0;
            for (int k = 0; k < n; ++k) {
                const double u = (k + 0.5) * h;
                const double r = u * u * u * u;
                sum += eval_G(spec, r) * std::pow(r, N - 1.0) * 4.0 * u * u * u;
            }
            CHECK(w.sphere_measure() * sum * h == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(eval_G(spec, 0.5) > 0.0);
        }
    }
    CHECK_THROWS_AS(kernel_constant(KernelSpec{WeightVector({1.0}), 0.0}), std::invalid_argument);
}

TEST_CASE("omega weight") {
    const WeightVector w({1.0});
    // mu = (N - nu)/2 = 1.5 for nu = -1.
    const double r = 0.8;
    CHECK(eval_omega_weight(w, -1.0, r, 2.0) == doctest::Approx(2.0 * std::cyl_bessel_k(1.5, r) * std::pow(r, 1.5)).epsilon(1e-12));
    CHECK_THROWS_AS(eval_omega_weight(w, 1.0, 0.0, 1.0), std::invalid_argument);
}
