#include "bh/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace bh::quad {

namespace {

// Symmetric tridiagonal Jacobi matrix -> rule. mu0 is the total mass of the weight.
Rule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0) {
    const auto n = diag.size();
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = diag[0];
        rule.weights[0] = mu0;
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("gauss rule: tridiagonal eigenproblem failed");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        rule.nodes[k] = solver.eigenvalues()[k];
        const double v0 = solver.eigenvectors()(0, k);
        rule.weights[k] = mu0 * v0 * v0;
    }
    return rule;
}

}  // namespace

Rule gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd off(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        off[static_cast<Eigen::Index>(k - 1)] = kk / std::sqrt(4.0 * kk * kk - 1.0);
    }
    Rule r = golub_welsch(diag, off, 2.0);
    // Legendre nodes are symmetric; enforce it to remove eigen-solver noise.
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double x = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
        const double w = 0.5 * (r.weights[n - 1 - i] + r.weights[i]);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

Rule gauss_jacobi(std::size_t n, double alpha, double beta) {
    if (n == 0) throw std::invalid_argument("gauss_jacobi: n must be positive");
    if (!(alpha > -1.0) || !(beta > -1.0)) {
        throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
    }
    const double ab = alpha + beta;
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::VectorXd diag(ni);
    Eigen::VectorXd off(n > 1 ? ni - 1 : 0);
    diag[0] = (beta - alpha) / (ab + 2.0);
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double s = 2.0 * kk + ab;
        diag[static_cast<Eigen::Index>(k)] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double s = 2.0 * kk + ab;
        double b;
        if (k == 1) {
            b = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            b = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) /
                (s * s * (s + 1.0) * (s - 1.0));
        }
        off[static_cast<Eigen::Index>(k - 1)] = std::sqrt(b);
    }
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                                std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
    return golub_welsch(diag, off, mu0);
}

Rule gauss_jacobi_unit(std::size_t n, double p, double q) {
    // u = (1 + x)/2: (1-x)^q (1+x)^p = 2^{p+q} (1-u)^q u^p, du = dx/2.
    Rule r = gauss_jacobi(n, q, p);
    const double scale = std::pow(2.0, -(p + q + 1.0));
    for (std::size_t k = 0; k < r.size(); ++k) {
        r.nodes[k] = 0.5 * (1.0 + r.nodes[k]);
        r.weights[k] *= scale;
    }
    return r;
}

Rule map_to_interval(const Rule& reference, double lo, double hi) {
    Rule out;
    out.nodes.resize(reference.size());
    out.weights.resize(reference.size());
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t k = 0; k < reference.size(); ++k) {
        out.nodes[k] = mid + half * reference.nodes[k];
        out.weights[k] = half * reference.weights[k];
    }
    return out;
}

}  // namespace bh::quad
