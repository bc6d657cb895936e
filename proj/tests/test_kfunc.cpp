#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bh/corpus.hpp"
#include "bh/hankel.hpp"
#include "bh/kfunc.hpp"
#include "bh/translation.hpp"

#include <cmath>

using namespace bh;

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

GridFunction gaussian(const HankelPlan& hp) {
    return GridFunction::sample(hp.space(), [](std::span<const double> x) { return std::exp(-0.5 * norm2(x)); });
}

std::vector<double> geometric(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(n - 1));
    return out;
}

}  // namespace

TEST_CASE("Laplacian of a Gaussian is (|x|^2 - N) times the Gaussian") {
    for (const auto& a : {std::vector<double>{1.0}, std::vector<double>{0.5, 2.0}}) {
        const WeightVector w(a);
        const auto hp = make_hankel_plan(w, 128, 12.0, 12.0);
        const GridFunction f = gaussian(*hp);
        const double N = w.homogeneous_dim();
        for (auto mode : {LaplacianMode::spectral, LaplacianMode::stencil}) {
            const GridFunction L = bessel_laplacian(*hp, f, mode);
            std::vector<double> x(w.dim());
            double err = 0.0;
            for (std::size_t k = 0; k < L.size(); ++k) {
                hp->space()->point(k, x);
                if (norm2(x) > 64.0) continue;
                err = std::max(err, std::abs(L[k] - (norm2(x) - N) * f[k]));
            }
            CHECK(err <= (mode == LaplacianMode::spectral ? 2e-5 : 1e-3));
        }
    }
}

TEST_CASE("Sobolev norms of the one-dimensional Gaussian") {
    // ||f||_2^2 = int exp(-x^2) x dx = 1/2 and ||(x^2 - 2) f||_2^2 = 1 for a = 1.
    const auto hp = make_hankel_plan(WeightVector({1.0}), 128, 12.0, 12.0);
    const GridFunction f = gaussian(*hp);
    const SobolevNorm s0 = sobolev_norm(*hp, f, 0, 2.0);
    CHECK(s0.total == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    const SobolevNorm s1 = sobolev_norm(*hp, f, 1, 2.0);
    REQUIRE(s1.components.size() == 2);
    CHECK(s1.components[1] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(s1.total == doctest::Approx(std::sqrt(1.5)).epsilon(1e-7));
    // ||Delta^2 f||: Delta (x^2 - 2) f = (x^4 - 8x^2 + 8) f, and int (u^2 - 8u + 8)^2 exp(-u) du / 2 = 12.
    const SobolevNorm s2 = sobolev_norm(*hp, f, 2, 2.0);
    CHECK(s2.components[2] == doctest::Approx(std::sqrt(12.0)).epsilon(1e-6));
    CHECK_THROWS_AS(sobolev_norm(*hp, f, 3, 2.0), std::invalid_argument);
}

TEST_CASE("smooth cutoff and P_nu") {
    CHECK(eta_cutoff(0.0) == 1.0);
    CHECK(eta_cutoff(1.0) == 1.0);
    CHECK(eta_cutoff(2.0) == 0.0);
    CHECK(eta_cutoff(5.0) == 0.0);
    double prev = 1.0;
    for (double u = 1.0; u <= 2.0; u += 0.01) {
        const double e = eta_cutoff(u);
        CHECK(e <= prev);
        prev = e;
    }
    const auto hp = make_hankel_plan(WeightVector({1.0}), 128, 12.0, 12.0);
    const GridFunction f = gaussian(*hp);
    const GridFunction g = smooth_Pnu(*hp, f, 3.0);
    // The spectrum of g lies in |xi| <= 6, where eta(|xi| / 6) = 1.
    CHECK(sup_distance(smooth_Pnu(*hp, g, 6.0), g) <= 1e-6);
    const SpectralFunction G = smooth_Pnu_spectrum(*hp, f, 1.0);
    std::vector<double> xi(1);
    for (std::size_t k = 0; k < G.size(); ++k) {
        G.grid().point(k, xi);
        if (xi[0] >= 2.0) CHECK(G[k] == 0.0);
    }
}

TEST_CASE("best approximation bounds") {
    // (int_{2nu}^inf exp(-x^2) x dx)^{1/2} <= ||f - P_nu f|| <= (int_nu^inf exp(-x^2) x dx)^{1/2}.
    const auto hp = make_hankel_plan(WeightVector({1.0}), 128, 12.0, 12.0);
    const GridFunction f = gaussian(*hp);
    double prev = std::numeric_limits<double>::infinity();
    for (double nu : {0.5, 1.0, 1.5, 2.0, 2.5}) {
        const double e = best_approx_E(*hp, f, nu, 2.0);
        CHECK(e <= std::sqrt(0.5 * std::exp(-nu * nu)) * (1.0 + 1e-6));
        CHECK(e >= std::sqrt(0.5 * std::exp(-4.0 * nu * nu)) * (1.0 - 1e-6));
        CHECK(e <= prev);
        prev = e;
    }
}

TEST_CASE("K-functional bound") {
    const auto hp = make_hankel_plan(WeightVector({1.0}), 128, 12.0, 12.0);
    const GridFunction f = gaussian(*hp);
    double prev = 0.0;
    for (double tau : {1e-4, 1e-2, 0.1, 1.0, 10.0, 1e3}) {
        const KFunctionalResult k = k_functional(*hp, f, tau, 1, 2.0);
        CHECK(k.value <= lp_norm(f, 2.0) * (1.0 + 1e-12));
        CHECK(k.value >= prev * (1.0 - 1e-12));
        // g = P_nu f with tau ||Delta g|| <= tau ||Delta f|| = tau bounds K from above as well.
        CHECK(k.value <= best_approx_E(*hp, f, 1.0 / std::sqrt(tau), 2.0) + tau * 1.0 + 1e-9);
        prev = k.value;
    }
}

TEST_CASE("equivalence constant on the standard corpus") {
    const WeightVector w({1.0});
    const auto hp = make_hankel_plan(w, 128, 12.0, 12.0);
    const auto plan = make_translation_plan(hp);
    std::vector<NamedFunction> fs;
    for (const auto& item : standard_corpus(w, "equivalence")) fs.push_back({item.id, realize(item, *hp, 1.0)});
    const std::vector<double> t = geometric(0.05, 2.0, 12);
    const EquivalenceTable eq = equivalence_experiment(*plan, fs, 1, 2.0, t);
    CHECK(eq.rows.size() == (fs.size() - eq.excluded.size()) * t.size());
    CHECK(eq.constant >= 1.0);
    CHECK(eq.constant == doctest::Approx(std::max(eq.max_ratio, 1.0 / eq.min_ratio)).epsilon(1e-12));
    CHECK(eq.constant == doctest::Approx(4.23076).epsilon(1e-4));
}

TEST_CASE("log-log slope") {
    std::vector<double> x{0.1, 0.3, 1.0, 4.0};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 2.5));
    CHECK(loglog_slope(x, y) == doctest::Approx(2.5).epsilon(1e-12));
    y[0] = 0.0;
    CHECK(loglog_slope(x, y, 1e-300) == doctest::Approx(2.5).epsilon(1e-12));
}
