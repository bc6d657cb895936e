#include "bh/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bh {

namespace {

constexpr double kSeriesLimit = 12.0;

// Accumulated in long double: the terms peak near 3e3 at z = 12.
double j_power_series(double alpha, double z) {
    const long double q = 0.25L * z * z;
    long double term = 1.0L;
    long double sum = 1.0L;
    long double peak = 1.0L;
    for (int k = 0; k < 500; ++k) {
        term *= -q / ((k + 1.0L) * (k + 1.0L + alpha));
        sum += term;
        peak = std::max(peak, std::abs(term));
        if (k + 1.0 > 0.5 * z && std::abs(term) <= 1e-20L * peak) break;
    }
    return static_cast<double>(sum);
}

// J_alpha for alpha >= -1/2 and z > 0.
double cyl_j(double alpha, double z) {
    if (alpha >= 0.0) return std::cyl_bessel_j(alpha, z);
    // Downward step from the nonnegative orders alpha+1 and alpha+2.
    return 2.0 * (alpha + 1.0) / z * std::cyl_bessel_j(alpha + 1.0, z) -
           std::cyl_bessel_j(alpha + 2.0, z);
}

// Taylor coefficients of 1/Gamma(z) (coefficient of z^k at index k-1).
constexpr std::array<double, 26> kRecipGamma = {
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001,
};

// gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2.
void temme_gammas(double mu, double& gam1, double& gam2) {
    // 1/Gamma(1+z) = sum_j b_j z^j with b_j = kRecipGamma[j].
    gam1 = 0.0;
    gam2 = 0.0;
    double pw = 1.0;
    for (std::size_t j = 0; j < kRecipGamma.size(); ++j) {
        if (j % 2 == 0) {
            gam2 += kRecipGamma[j] * pw;
        } else {
            gam1 -= kRecipGamma[j] * pw / mu;
        }
        pw *= mu;
    }
    if (mu == 0.0) gam1 = -kRecipGamma[1];
}

// K_mu and K_{mu+1} for |mu| <= 1/2.
void k_pair(double mu, double x, double& kmu, double& kmu1) {
    constexpr double kEps = 1e-17;
    if (x < 2.0) {
        // Temme's series.
        const double x2 = 0.5 * x;
        const double pimu = std::numbers::pi * mu;
        const double fact = std::abs(pimu) < 1e-15 ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = mu * d;
        const double fact2 = std::abs(e) < 1e-15 ? 1.0 : std::sinh(e) / e;
        double gam1 = 0.0;
        double gam2 = 0.0;
        if (mu == 0.0) {
            gam1 = -kRecipGamma[1];
            gam2 = 1.0;
        } else {
            temme_gammas(mu, gam1, gam2);
        }
        const double gampl = gam2 - mu * gam1;  // 1/Gamma(1+mu)
        const double gammi = gam2 + mu * gam1;  // 1/Gamma(1-mu)
        double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / gampl;
        double q = 0.5 / (e * gammi);
        double c = 1.0;
        d = x2 * x2;
        double sum1 = p;
        const double mu2 = mu * mu;
        for (int i = 1; i < 500; ++i) {
            ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
            c *= d / i;
            p /= i - mu;
            q /= i + mu;
            const double del = c * ff;
            sum += del;
            sum1 += c * (p - i * ff);
            if (std::abs(del) < std::abs(sum) * kEps) break;
        }
        kmu = sum;
        kmu1 = sum1 * 2.0 / x;
        return;
    }
    // Steed's continued fraction: exp(-x) sqrt(pi/(2x)) corrected by a CF.
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu * mu;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i < 10000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) break;
    }
    h *= a1;
    kmu = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    kmu1 = kmu * (mu + x + 0.5 - h) / x;
}

}  // namespace

double j_series(double alpha, double z, int terms) {
    const long double q = 0.25L * z * z;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 0; k + 1 < terms; ++k) {
        term *= -q / ((k + 1.0L) * (k + 1.0L + alpha));
        sum += term;
    }
    return static_cast<double>(sum);
}

double eval_j(BesselOrder order, double z) {
    const double alpha = order.alpha;
    if (!(alpha >= -0.5)) throw std::invalid_argument("eval_j: alpha must be >= -1/2");
    if (!(z >= 0.0)) throw std::invalid_argument("eval_j: z must be nonnegative");
    if (z == 0.0) return 1.0;
    if (alpha == -0.5) return std::cos(z);
    if (alpha == 0.5) return std::sin(z) / z;
    if (z <= kSeriesLimit) return j_power_series(alpha, z);
    return std::exp(std::lgamma(alpha + 1.0) + alpha * std::log(2.0 / z)) * cyl_j(alpha, z);
}

double eval_j_deriv(BesselOrder order, double z) {
    if (!(order.alpha > -1.0)) throw std::invalid_argument("eval_j_deriv: alpha must exceed -1");
    if (!(z >= 0.0)) throw std::invalid_argument("eval_j_deriv: z must be nonnegative");
    if (z == 0.0) return 0.0;
    return -z * eval_j(order.alpha + 1.0, z) / (2.0 * (order.alpha + 1.0));
}

double eval_K(double nu, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("eval_K: r must be positive");
    if (!(nu >= 0.0)) throw std::invalid_argument("eval_K: nu must be nonnegative");
    const int nl = static_cast<int>(nu + 0.5);
    const double mu = nu - nl;
    double kmu = 0.0;
    double kmu1 = 0.0;
    k_pair(mu, r, kmu, kmu1);
    for (int i = 1; i <= nl; ++i) {
        const double next = (mu + i) * (2.0 / r) * kmu1 + kmu;
        kmu = kmu1;
        kmu1 = next;
    }
    return kmu;
}

double eval_jj(const WeightVector& weight, std::span<const double> x, std::span<const double> xi) {
    if (x.size() != weight.dim() || xi.size() != weight.dim()) {
        throw std::invalid_argument("eval_jj: dimension mismatch");
    }
    double prod = 1.0;
    for (std::size_t i = 0; i < weight.dim(); ++i) prod *= eval_j(weight.alpha(i), x[i] * xi[i]);
    return prod;
}

double kernel_constant(const KernelSpec& spec) {
    if (!(spec.nu > 0.0)) throw std::invalid_argument("kernel_constant: nu must be positive");
    const WeightVector& w = spec.weight;
    const double n = static_cast<double>(w.dim());
    double log_gamma = std::lgamma(0.5 * spec.nu);
    for (std::size_t i = 0; i < w.dim(); ++i) log_gamma += std::lgamma(w.alpha(i) + 1.0);
    const double expo = 0.5 * (n - w.total() - spec.nu) + 1.0;
    return std::exp(expo * std::log(2.0) - log_gamma);
}

double eval_G(const KernelSpec& spec, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("eval_G: r must be positive");
    const double mu = 0.5 * (spec.weight.homogeneous_dim() - spec.nu);
    return kernel_constant(spec) * eval_K(std::abs(mu), r) * std::pow(r, -mu);
}

double eval_omega_weight(const WeightVector& weight, double nu, double r, double constant) {
    if (!(r > 0.0)) throw std::invalid_argument("eval_omega_weight: r must be positive");
    const double mu = 0.5 * (weight.homogeneous_dim() - nu);
    return constant * eval_K(std::abs(mu), r) * std::pow(r, mu);
}

}  // namespace bh
