#include "bh/capacity.hpp"

#include "bh/kfunc.hpp"
#include "bh/parallel.hpp"
#include "bh/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace bh {

namespace {

using Vec = Eigen::VectorXd;

double conjugate(double p) { return p / (p - 1.0); }

Vec grid_weights(const Grid& grid) {
    Vec q(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k) q[static_cast<Eigen::Index>(k)] = grid.quad_weight(k);
    return q;
}

// Frequency-side tensor prod_i c_i w_i(xi_i) j_{alpha_i}(x_i xi_i) for one point x.
std::vector<double> point_spectrum(const HankelPlan& plan, std::span<const double> x) {
    const Grid& freq = *plan.freq();
    std::vector<tensor::Matrix> rows;
    for (std::size_t i = 0; i < plan.dim(); ++i) rows.push_back(plan.evaluation_matrix(i, x.subspan(i, 1)));
    std::vector<double> out(freq.size());
    const auto& shape = freq.shape();
    std::vector<std::size_t> idx(plan.dim(), 0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        double v = 1.0;
        for (std::size_t i = 0; i < plan.dim(); ++i) v *= rows[i](0, static_cast<Eigen::Index>(idx[i]));
        out[k] = v;
        for (std::size_t i = plan.dim(); i-- > 0;) {
            if (++idx[i] < shape[i]) break;
            idx[i] = 0;
        }
    }
    return out;
}

// Unnormalized measure spectrum sum_j m_j prod_i j_{alpha_i}(x_ji xi_i).
std::vector<double> measure_spectrum(const HankelPlan& plan, const AtomicMeasure& mu) {
    const Grid& freq = *plan.freq();
    std::vector<double> out(freq.size(), 0.0);
    std::vector<double> xi(plan.dim());
    for (std::size_t k = 0; k < out.size(); ++k) {
        freq.point(k, xi);
        double sum = 0.0;
        for (std::size_t j = 0; j < mu.points.size(); ++j) {
            sum += mu.masses[j] * eval_jj(plan.weight(), mu.points[j], xi);
        }
        out[k] = sum;
    }
    return out;
}

Vec positive_part(const Vec& v) { return v.cwiseMax(0.0); }

// Optimal density for multipliers m: g = (v_+ / (p q))^{1/(p-1)}, v = A^T m.
Vec density_for(const tensor::Matrix& A, const Vec& q, const Vec& m, double p) {
    const Vec v = A.transpose() * m;
    Vec g(v.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        g[k] = v[k] > 0.0 ? std::pow(v[k] / (p * q[k]), 1.0 / (p - 1.0)) : 0.0;
    }
    return g;
}

double lp_power(const Vec& g, const Vec& q, double p) {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < g.size(); ++k) sum += q[k] * std::pow(std::abs(g[k]), p);
    return sum;
}

// ||(A^T m / q)_+||_{p'} on the grid.
double constraint_norm(const tensor::Matrix& A, const Vec& q, const Vec& m, double pc) {
    const Vec w = (A.transpose() * m).cwiseQuotient(q);
    return std::pow(lp_power(positive_part(w), q, pc), 1.0 / pc);
}

// Lagrangian dual value sum m - (p-1) sum q g^p.
double lagrangian_dual(const tensor::Matrix& A, const Vec& q, const Vec& m, double p, Vec* g_out) {
    Vec g = density_for(A, q, m, p);
    const double value = m.sum() - (p - 1.0) * lp_power(g, q, p);
    if (g_out) *g_out = std::move(g);
    return value;
}

struct Certificate {
    double primal = 0.0;  // ||g||^p of the rescaled feasible density
    double dual = 0.0;    // mu(K) of the normalized measure
    Vec g;
    Vec mu;
    double slack = 0.0;
    double gap = 1.0;
};

// Feasible primal from a nonnegative direction g and a normalized measure from m.
Certificate certify(const tensor::Matrix& A, const Vec& q, const Vec& g, const Vec& m, double p) {
    Certificate c;
    const Vec Ag = A * g;
    const double lo = Ag.size() > 0 ? Ag.minCoeff() : 0.0;
    if (lo > 0.0) {
        c.g = g / lo;
        c.primal = lp_power(c.g, q, p);
        c.slack = (A * c.g).minCoeff() - 1.0;
    } else {
        c.g = Vec::Zero(g.size());
        c.primal = std::numeric_limits<double>::infinity();
        c.slack = -1.0;
    }
    const double phi = constraint_norm(A, q, m, conjugate(p));
    if (phi > 0.0 && m.sum() > 0.0) {
        c.mu = m / phi;
        c.dual = c.mu.sum();
    } else {
        c.mu = Vec::Zero(m.size());
        c.dual = 0.0;
    }
    const double root = std::pow(c.primal, 1.0 / p);
    c.gap = std::isfinite(root) && root > 0.0 ? (root - c.dual) / root : 1.0;
    return c;
}

CapacityResult to_result(const CompactSet& K, const Certificate& c, std::size_t iterations,
                         const SolverOptions& options) {
    CapacityResult r;
    r.primal_value = c.primal;
    r.dual_value = c.dual;
    r.density.assign(c.g.data(), c.g.data() + c.g.size());
    r.measure.points = K.points;
    r.measure.masses.assign(c.mu.data(), c.mu.data() + c.mu.size());
    r.iterations = iterations;
    r.min_slack = c.slack;
    r.gap = c.gap;
    r.converged = std::isfinite(c.primal) && c.gap <= options.accept_gap;
    return r;
}

CapacityResult empty_result(const HankelPlan& plan) {
    CapacityResult r;
    r.density.assign(plan.space()->size(), 0.0);
    return r;
}

// Euclidean projection onto {x >= 0, sum x = 1}; the threshold is found by bisection.
Vec project_simplex(const Vec& y) {
    double lo = y.minCoeff() - 1.0;
    double hi = y.maxCoeff();
    for (int it = 0; it < 200; ++it) {
        const double tau = 0.5 * (lo + hi);
        const double sum = (y.array() - tau).max(0.0).sum();
        (sum > 1.0 ? lo : hi) = tau;
        if (hi - lo <= 1e-16 * std::max(1.0, std::abs(hi))) break;
    }
    return (y.array() - 0.5 * (lo + hi)).max(0.0).matrix();
}

}  // namespace

double AtomicMeasure::total() const { return std::accumulate(masses.begin(), masses.end(), 0.0); }

void check_capacity_problem(const HankelPlan& plan, const CompactSet& K, double p, double s) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("capacity: p must lie in (1, inf)");
    if (!(s > 0.0 && s < 2.0)) throw std::invalid_argument("capacity: s must lie in (0, 2)");
    const Grid& g = *plan.space();
    for (const auto& x : K.points) {
        if (x.size() != g.dim()) throw std::invalid_argument("capacity: point dimension mismatch");
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!(x[i] > 0.0 && x[i] < g.axis(i).cutoff)) {
                throw std::invalid_argument("capacity: point outside the open grid domain");
            }
        }
    }
}

tensor::Matrix capacity_kernel(const HankelPlan& plan, const CompactSet& K, double s) {
    const Grid& freq = *plan.freq();
    std::vector<double> symbol(freq.size());
    std::vector<double> xi(plan.dim());
    for (std::size_t k = 0; k < freq.size(); ++k) {
        freq.point(k, xi);
        double r2 = 0.0;
        for (double c : xi) r2 += c * c;
        symbol[k] = std::pow(1.0 + r2, -0.5 * s);
    }
    std::vector<tensor::Matrix> fwd_t;
    for (std::size_t i = 0; i < plan.dim(); ++i) fwd_t.emplace_back(plan.forward(i).transpose());
    const std::size_t n_space = plan.space()->size();
    tensor::Matrix A(static_cast<Eigen::Index>(K.points.size()), static_cast<Eigen::Index>(n_space));
    parallel_for(K.points.size(), [&](std::size_t j) {
        std::vector<double> v = point_spectrum(plan, K.points[j]);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] *= symbol[k];
        std::vector<std::size_t> shape = freq.shape();
        for (std::size_t i = 0; i < plan.dim(); ++i) {
            v = tensor::apply_along_axis(v, shape, i, fwd_t[i]);
            shape[i] = plan.space()->shape()[i];
        }
        for (std::size_t k = 0; k < n_space; ++k) A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = v[k];
    });
    return A;
}

CapacityResult capacity_primal(const HankelPlan& plan, const CompactSet& K, double p, double s,
                               const SolverOptions& options) {
    check_capacity_problem(plan, K, p, s);
    if (K.empty()) return empty_result(plan);
    const tensor::Matrix A = capacity_kernel(plan, K, s);
    const Vec q = grid_weights(*plan.space());
    const auto J = A.rows();

    Vec m = Vec::Constant(J, 1.0 / static_cast<double>(J));
    Vec m_prev = m;
    Vec g;
    double value = lagrangian_dual(A, q, m, p, &g);
    double step = 1.0;
    double momentum = 1.0;
    Certificate best = certify(A, q, g, m, p);
    std::size_t it = 0;
    for (; it < options.max_iterations && best.gap > options.tolerance; ++it) {
        const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
        const Vec y = (m + ((momentum - 1.0) / next_momentum) * (m - m_prev)).cwiseMax(0.0);
        Vec gy;
        const double dy = lagrangian_dual(A, q, y, p, &gy);
        const Vec grad = Vec::Ones(J) - A * gy;
        Vec candidate;
        Vec g_candidate;
        double d_candidate = 0.0;
        for (int bt = 0; bt < 60; ++bt) {
            candidate = (y + step * grad).cwiseMax(0.0);
            d_candidate = lagrangian_dual(A, q, candidate, p, &g_candidate);
            const Vec delta = candidate - y;
            if (d_candidate >= dy + grad.dot(delta) - delta.squaredNorm() / (2.0 * step) - 1e-15 * std::abs(dy)) {
                break;
            }
            step *= 0.5;
        }
        if (d_candidate < value) {
            // Adaptive restart: drop the momentum and retry from the current iterate.
            momentum = 1.0;
            m_prev = m;
            continue;
        }
        m_prev = m;
        m = candidate;
        g = g_candidate;
        value = d_candidate;
        momentum = next_momentum;
        step *= 1.25;
        const Certificate c = certify(A, q, g, m, p);
        if (c.gap < best.gap) best = c;
    }
    return to_result(K, best, it, options);
}

CapacityResult capacity_dual(const HankelPlan& plan, const CompactSet& K, double p, double s,
                             const SolverOptions& options) {
    check_capacity_problem(plan, K, p, s);
    if (K.empty()) return empty_result(plan);
    const tensor::Matrix A = capacity_kernel(plan, K, s);
    const Vec q = grid_weights(*plan.space());
    const double pc = conjugate(p);
    const auto J = A.rows();

    const auto phi = [&](const Vec& mu) { return constraint_norm(A, q, mu, pc); };
    const auto gradient = [&](const Vec& mu, double value) {
        const Vec w = positive_part((A.transpose() * mu).cwiseQuotient(q));
        Vec h(w.size());
        for (Eigen::Index k = 0; k < w.size(); ++k) h[k] = std::pow(w[k], pc - 1.0);
        return Vec(A * h * std::pow(value, 1.0 - pc));
    };
    // Primal density paired with mu: g proportional to (G * mu)_+^{p'-1}.
    const auto paired_density = [&](const Vec& mu) {
        const Vec w = positive_part((A.transpose() * mu).cwiseQuotient(q));
        Vec g(w.size());
        for (Eigen::Index k = 0; k < w.size(); ++k) g[k] = std::pow(w[k], pc - 1.0);
        return g;
    };

    Vec mu = Vec::Constant(J, 1.0 / static_cast<double>(J));
    double value = phi(mu);
    Certificate best = certify(A, q, paired_density(mu), mu, p);
    double step = 1.0 / std::max(value, 1e-300);
    std::size_t it = 0;
    for (; it < options.max_iterations && best.gap > options.tolerance; ++it) {
        const Vec grad = gradient(mu, value);
        const double base = step / std::sqrt(static_cast<double>(it + 1));
        Vec candidate = mu;
        double v_candidate = value;
        double t = base;
        for (int bt = 0; bt < 60; ++bt) {
            candidate = project_simplex(mu - t * grad);
            v_candidate = phi(candidate);
            if (v_candidate <= value - 1e-4 * grad.dot(mu - candidate)) break;
            t *= 0.5;
        }
        if (v_candidate > value) break;
        if (t == base) step *= 1.5;
        mu = candidate;
        value = v_candidate;
        const Certificate c = certify(A, q, paired_density(mu), mu, p);
        if (c.gap < best.gap) best = c;
        if ((mu - candidate).norm() == 0.0 && t < 1e-300) break;
    }
    return to_result(K, best, it, options);
}

double single_point_capacity_p2(const HankelPlan& plan, const std::vector<double>& x0, double s) {
    const CompactSet K{{x0}, "point"};
    check_capacity_problem(plan, K, 2.0, s);
    const tensor::Matrix A = capacity_kernel(plan, K, s);
    const Vec q = grid_weights(*plan.space());
    double sum = 0.0;
    for (Eigen::Index k = 0; k < q.size(); ++k) {
        const double kernel = A(0, k) / q[k];
        if (kernel > 0.0) sum += q[k] * kernel * kernel;
    }
    return 1.0 / sum;
}

CompactSet neighbourhood(const CompactSet& K, double rho, const HankelPlan& plan) {
    if (!(rho >= 0.0)) throw std::invalid_argument("neighbourhood: rho must be nonnegative");
    constexpr double h = 0.025;
    const Grid& g = *plan.space();
    const std::size_t n = g.dim();
    const int steps = static_cast<int>(std::floor(rho / h + 1e-9));
    std::map<std::vector<long long>, std::vector<double>> unique;
    CompactSet out;
    out.label = K.label + "+N(" + std::to_string(rho) + ")";
    const auto add = [&](const std::vector<double>& y) {
        std::vector<long long> key(n);
        for (std::size_t i = 0; i < n; ++i) key[i] = std::llround(y[i] * 1e9);
        if (unique.emplace(key, y).second) out.points.push_back(y);
    };
    std::vector<int> offset(n, -steps);
    for (const auto& x : K.points) {
        std::fill(offset.begin(), offset.end(), -steps);
        for (;;) {
            double r2 = 0.0;
            std::vector<double> y(n);
            bool inside = true;
            for (std::size_t i = 0; i < n; ++i) {
                const double o = h * offset[i];
                r2 += o * o;
                y[i] = x[i] + o;
                inside = inside && y[i] > 0.0 && y[i] < g.axis(i).cutoff;
            }
            if (inside && r2 <= rho * rho * (1.0 + 1e-12)) add(y);
            std::size_t i = n;
            while (i-- > 0) {
                if (++offset[i] <= steps) break;
                offset[i] = -steps;
            }
            if (i == static_cast<std::size_t>(-1)) break;
        }
    }
    return out;
}

std::vector<NeighbourhoodCapacity> capacity_N(const HankelPlan& plan, const CompactSet& K, double p,
                                              double s, const std::vector<double>& rhos,
                                              const SolverOptions& options) {
    check_capacity_problem(plan, K, p, s);
    std::vector<NeighbourhoodCapacity> out(rhos.size());
    parallel_for(rhos.size(), [&](std::size_t i) {
        const CompactSet U = neighbourhood(K, rhos[i], plan);
        out[i] = NeighbourhoodCapacity{rhos[i], U.points.size(), capacity_primal(plan, U, p, s, options)};
    });
    return out;
}

CompactSet refine(const CompactSet& K) {
    CompactSet out;
    out.label = K.label + "/2";
    for (std::size_t j = 0; j < K.points.size(); ++j) {
        out.points.push_back(K.points[j]);
        if (j + 1 < K.points.size()) {
            std::vector<double> mid(K.points[j].size());
            for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (K.points[j][i] + K.points[j + 1][i]);
            out.points.push_back(std::move(mid));
        }
    }
    return out;
}

namespace {

std::vector<double> centroid(const CompactSet& K) {
    std::vector<double> c(K.points.front().size(), 0.0);
    for (const auto& x : K.points) {
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += x[i];
    }
    for (double& v : c) v /= static_cast<double>(K.points.size());
    return c;
}

CompactSet shrink(const CompactSet& K, double scale) {
    const std::vector<double> c = centroid(K);
    CompactSet out;
    out.label = K.label + "*" + std::to_string(scale);
    for (const auto& x : K.points) {
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = c[i] + scale * (x[i] - c[i]);
        out.points.push_back(std::move(y));
    }
    return out;
}

// Share of sum_k q_k v_k^2 carried by nodes within rho of K.
double concentration(const Grid& grid, const std::vector<double>& v, const CompactSet& K, double rho) {
    double near = 0.0;
    double total = 0.0;
    std::vector<double> y(grid.dim());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        grid.point(k, y);
        const double e = grid.quad_weight(k) * v[k] * v[k];
        total += e;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& x : K.points) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) d2 += (y[i] - x[i]) * (y[i] - x[i]);
            best = std::min(best, d2);
        }
        if (best <= rho * rho) near += e;
    }
    return total > 0.0 ? near / total : 0.0;
}

}  // namespace

RemovabilityReport removability_experiment(const HankelPlan& plan, const RemovabilityConfig& config,
                                           const SolverOptions& options) {
    const double s = config.s;
    if (!(s < 2.0)) throw std::invalid_argument("removability: requires s < 2");
    if (config.s_list.empty()) throw std::invalid_argument("removability: s_list is empty");
    if (config.s_list.size() != config.a_list.size()) {
        throw std::invalid_argument("removability: s_list and a_list differ in length");
    }
    for (double sk : config.s_list) {
        if (!(sk >= 0.0)) throw std::invalid_argument("removability: s_k must be nonnegative");
        if (!(sk < s)) throw std::invalid_argument("removability: requires s > max s_k");
    }
    if (config.K.empty()) throw std::invalid_argument("removability: K is empty");
    if (!(config.p > 1.0)) throw std::invalid_argument("removability: p must exceed 1");
    const double pc = conjugate(config.p);
    check_capacity_problem(plan, config.K, pc, s);

    struct Instance {
        CompactSet set;
        double scale;
        std::size_t refinement;
    };
    std::vector<Instance> instances;
    CompactSet level = config.K;
    for (std::size_t r = 0; r <= config.refinements; ++r) {
        instances.push_back({level, 1.0, r});
        if (r < config.refinements) level = refine(level);
    }
    const std::size_t first_shrink = instances.size();
    for (double scale : config.scales) {
        if (!(scale > 0.0 && scale <= 1.0)) throw std::invalid_argument("removability: scales must lie in (0, 1]");
        instances.push_back({shrink(config.K, scale), scale, 0});
    }

    RemovabilityReport report;
    report.rows.resize(instances.size());
    std::vector<CapacityResult> results(instances.size());
    parallel_for(instances.size(), [&](std::size_t i) {
        const auto& inst = instances[i];
        results[i] = capacity_primal(plan, inst.set, pc, s, options);
        const CapacityResult dual = capacity_dual(plan, inst.set, pc, s, options);
        const double root = std::pow(results[i].primal_value, 1.0 / pc);
        const double best_dual = std::max(results[i].dual_value, dual.dual_value);
        RemovabilityRow row;
        row.label = inst.set.label;
        row.scale = inst.scale;
        row.refinement = inst.refinement;
        row.points = inst.set.points.size();
        row.capacity = results[i].primal_value;
        row.dual = best_dual;
        row.gap = root > 0.0 ? (root - best_dual) / root : 0.0;
        row.weak_duality = best_dual <= root + 1e-4;
        row.converged = results[i].converged;
        report.rows[i] = row;
    });

    const std::vector<double> c = centroid(config.K);
    report.single_point_capacity = pc == 2.0 ? single_point_capacity_p2(plan, c, s)
                                             : capacity_primal(plan, CompactSet{{c}, "centroid"}, pc, s, options).primal_value;
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = first_shrink; i < instances.size(); ++i) lo = std::min(lo, report.rows[i].capacity);
    report.trend_ratio = first_shrink < instances.size() ? lo / report.single_point_capacity : 0.0;
    report.sp_prime = s * pc;

    // Constructive side on the finest refinement: u = G_s * mu with the dual measure.
    const std::size_t finest = first_shrink - 1;
    const CompactSet& Kf = instances[finest].set;
    const AtomicMeasure& mu = results[finest].measure;
    const std::vector<double> spectrum = measure_spectrum(plan, mu);
    double Xi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < plan.dim(); ++i) Xi = std::min(Xi, plan.freq()->axis(i).cutoff);
    const Grid& freq = *plan.freq();
    std::vector<double> exact(freq.size());
    std::vector<double> general(freq.size());
    std::vector<double> xi(plan.dim());
    for (std::size_t k = 0; k < freq.size(); ++k) {
        freq.point(k, xi);
        double r2 = 0.0;
        for (double v : xi) r2 += v * v;
        const double window = eta_cutoff(2.0 * std::sqrt(r2) / Xi) * spectrum[k];
        exact[k] = window;
        double symbol = 0.0;
        for (std::size_t j = 0; j < config.s_list.size(); ++j) {
            symbol += config.a_list[j] * std::pow(1.0 + r2, 0.5 * (config.s_list[j] - s));
        }
        general[k] = symbol * window;
    }
    const GridFunction lu_exact = hankel_inverse(plan, SpectralFunction(plan.freq(), exact));
    const GridFunction lu_general = hankel_inverse(plan, SpectralFunction(plan.freq(), general));
    report.concentration = concentration(*plan.space(), lu_exact.values(), Kf, config.neighbourhood_radius);
    report.operator_concentration =
        concentration(*plan.space(), lu_general.values(), Kf, config.neighbourhood_radius);
    return report;
}

}  // namespace bh
