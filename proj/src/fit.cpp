#include "lcfit/fit.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "lcfit/errors.hpp"

namespace lcfit {

namespace {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

Vec3 clamp_to_box(const Vec3& p, const Vec3& lo, const Vec3& hi) {
    return p.cwiseMax(lo).cwiseMin(hi);
}

// Model predictions for parameter vector p = (alpha, beta, gamma).
Eigen::VectorXd predict(const Vec3& p, const Eigen::VectorXd& n) {
    return p[0] - p[1] * Eigen::pow(n.array(), -p[2]);
}

Eigen::MatrixX3d model_jacobian(const Vec3& p, const Eigen::VectorXd& n) {
    Eigen::MatrixX3d jac(n.size(), 3);
    const Eigen::ArrayXd n_pow = Eigen::pow(n.array(), -p[2]);
    jac.col(0).setOnes();
    jac.col(1) = -n_pow;
    jac.col(2) = p[1] * n_pow * Eigen::log(n.array());
    return jac;
}

// A coordinate is bound-blocked when it sits on a bound and steepest descent
// points outside the box.
bool blocked(int i, const Vec3& g, const Vec3& p, const Vec3& lo, const Vec3& hi) {
    return (p[i] <= lo[i] && g[i] > 0.0) || (p[i] >= hi[i] && g[i] < 0.0);
}

// Gradient components of bound-blocked coordinates are zeroed; the result is
// the convergence certificate for the box-constrained problem.
Vec3 projected_gradient(const Vec3& g, const Vec3& p, const Vec3& lo, const Vec3& hi) {
    Vec3 pg = g;
    for (int i = 0; i < 3; ++i)
        if (blocked(i, g, p, lo, hi)) pg[i] = 0.0;
    return pg;
}

// Solve the damped normal equations over the free coordinates only. Rows and
// columns of blocked coordinates are replaced by identity so they contribute a
// zero step; solving the full system instead would let the blocked coordinate
// soak up most of the predicted reduction and stall the free ones.
Vec3 solve_reduced(const Mat3& normal, double mu, const Vec3& gradient, const Vec3& p,
                   const Vec3& lo, const Vec3& hi) {
    Mat3 damped = normal + mu * Mat3::Identity();
    Vec3 rhs = -gradient;
    for (int i = 0; i < 3; ++i) {
        if (!blocked(i, gradient, p, lo, hi)) continue;
        damped.row(i).setZero();
        damped.col(i).setZero();
        damped(i, i) = 1.0;
        rhs[i] = 0.0;
    }
    return damped.ldlt().solve(rhs);
}

void validate_config(const FitConfig& c) {
    if (!(c.gradient_tolerance > 0.0) || !(c.step_tolerance > 0.0))
        throw DomainError("fit: tolerances must be strictly positive");
    if (c.max_iterations < 1)
        throw DomainError("fit: max_iterations must be >= 1");
    const bool inside = c.alpha0 >= c.alpha_min && c.alpha0 <= c.alpha_max &&
                        c.beta0 >= 0.0 && c.beta0 <= kParamCeiling &&
                        c.gamma0 >= 0.0 && c.gamma0 <= kParamCeiling;
    if (!inside)
        throw DomainError("fit: initial guess must lie inside the parameter bounds");
}

int count_distinct_n(std::span<const FitPoint> points) {
    std::set<std::int64_t> distinct;
    for (const auto& pt : points) distinct.insert(pt.n_cases);
    return static_cast<int>(distinct.size());
}

} // namespace

Eigen::MatrixX3d jacobian(const PowerLawCurve& curve, std::span<const double> n_values) {
    Eigen::VectorXd n(n_values.size());
    for (Eigen::Index i = 0; i < n.size(); ++i) {
        detail::require_training_size(n_values[i]);
        n[i] = n_values[i];
    }
    return model_jacobian(Vec3(curve.alpha, curve.beta, curve.gamma), n);
}

FitResult fit(std::span<const FitPoint> points, const FitConfig& config) {
    validate_config(config);

    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].n_cases < 1)
            throw ValidationError("fit: point " + std::to_string(i + 1) +
                                  ": n_cases must be >= 1, got " +
                                  std::to_string(points[i].n_cases));
        if (!(points[i].roc_auc >= 0.0 && points[i].roc_auc <= 1.0))
            throw ValidationError("fit: point " + std::to_string(i + 1) +
                                  ": roc_auc must lie in [0, 1], got " +
                                  std::to_string(points[i].roc_auc));
    }
    const int n_distinct = count_distinct_n(points);
    if (n_distinct < 3)
        throw InsufficientDataError("fit: need at least 3 distinct n values, got " +
                                    std::to_string(n_distinct));

    const Eigen::Index m = static_cast<Eigen::Index>(points.size());
    Eigen::VectorXd n(m), y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        n[i] = static_cast<double>(points[i].n_cases);
        y[i] = points[i].roc_auc;
    }

    const Vec3 lo(config.alpha_min, 0.0, 0.0);
    const Vec3 hi(config.alpha_max, kParamCeiling, kParamCeiling);

    Vec3 p(config.alpha0, config.beta0, config.gamma0);
    Eigen::VectorXd residual = predict(p, n) - y;
    double objective = 0.5 * residual.squaredNorm();
    Eigen::MatrixX3d jac = model_jacobian(p, n);
    Vec3 gradient = jac.transpose() * residual;
    Mat3 normal = jac.transpose() * jac;

    double mu = 1e-3 * normal.diagonal().maxCoeff();
    if (!(mu > 0.0)) mu = 1e-3;
    double nu = 2.0;

    Termination termination = Termination::MaxIterations;
    int iterations = 0;
    double last_step_norm = 0.0;

    double pg_norm = projected_gradient(gradient, p, lo, hi).lpNorm<Eigen::Infinity>();
    bool done = pg_norm <= config.gradient_tolerance;
    if (done) termination = Termination::GradientSmall;

    while (!done && iterations < config.max_iterations) {
        ++iterations;

        const Vec3 raw_step = solve_reduced(normal, mu, gradient, p, lo, hi);
        const Vec3 trial = clamp_to_box(p + raw_step, lo, hi);
        const Vec3 step = trial - p;
        last_step_norm = step.norm();

        if (last_step_norm <= config.step_tolerance * (p.norm() + config.step_tolerance)) {
            termination = Termination::StepSmall;
            break;
        }

        // Gauss-Newton model reduction for the projected step.
        const double predicted = -gradient.dot(step) - 0.5 * step.dot(normal * step);
        const Eigen::VectorXd trial_residual = predict(trial, n) - y;
        const double trial_objective = 0.5 * trial_residual.squaredNorm();
        const double gain = predicted > 0.0
                                ? (objective - trial_objective) / predicted
                                : -1.0;

        if (gain > 0.0) {
            p = trial;
            residual = trial_residual;
            objective = trial_objective;
            jac = model_jacobian(p, n);
            gradient = jac.transpose() * residual;
            normal = jac.transpose() * jac;
            mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * gain - 1.0, 3.0));
            nu = 2.0;

            pg_norm = projected_gradient(gradient, p, lo, hi).lpNorm<Eigen::Infinity>();
            if (pg_norm <= config.gradient_tolerance) {
                termination = Termination::GradientSmall;
                break;
            }
        } else {
            mu *= nu;
            nu *= 2.0;
            if (!std::isfinite(mu)) { // damping exhausted, no acceptable step exists
                termination = Termination::StepSmall;
                break;
            }
        }
    }

    const bool collapsed_beta = p[1] == 0.0;
    const double reported_gamma = collapsed_beta ? config.gamma0 : p[2];
    PowerLawCurve curve(p[0], p[1], reported_gamma);

    double sse = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double r = y[i] - evaluate(curve, n[i]);
        sse += r * r;
    }

    FitResult result{curve,
                     std::nullopt,
                     sse,
                     std::sqrt(sse / static_cast<double>(n_distinct)),
                     n_distinct,
                     termination != Termination::MaxIterations,
                     iterations,
                     termination,
                     collapsed_beta,
                     pg_norm,
                     last_step_norm};
    return result;
}

FitResult fit_with_cutoff(std::span<const FitPoint> points, std::int64_t cutoff,
                          const FitConfig& config) {
    if (cutoff < 1)
        throw DomainError("fit_with_cutoff: cutoff must be >= 1, got " + std::to_string(cutoff));

    std::vector<FitPoint> kept;
    kept.reserve(points.size());
    for (const auto& pt : points)
        if (pt.n_cases <= cutoff) kept.push_back(pt);

    const int n_distinct = count_distinct_n(kept);
    if (n_distinct < 3)
        throw InsufficientDataError(
            "fit_with_cutoff: only " + std::to_string(n_distinct) +
            " distinct n values survive cutoff " + std::to_string(cutoff) +
            ", need at least 3");

    FitResult result = fit(std::span<const FitPoint>(kept), config);
    result.cutoff = cutoff;
    return result;
}

} // namespace lcfit
