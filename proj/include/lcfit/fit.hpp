#ifndef LCFIT_FIT_HPP
#define LCFIT_FIT_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lcfit/power_law.hpp"

namespace lcfit {

/// One fit observation: mean (or raw) ROC-AUC measured with n_cases
/// distinct positive training examples.
struct FitPoint {
    std::int64_t n_cases;
    double roc_auc;
};

/// Upper bound substituted for the conceptually unbounded beta/gamma range
/// so that box projection stays total.
inline constexpr double kParamCeiling = 1e12;

struct FitConfig {
    // Start point and box, matching the reference fitting protocol.
    double alpha0 = 0.95;
    double beta0 = 0.5;
    double gamma0 = 1.0;
    double alpha_min = kAlphaLowerBound;
    double alpha_max = kAlphaUpperBound;

    int max_iterations = 200;
    double gradient_tolerance = 1e-8; // infinity norm of the projected gradient
    double step_tolerance = 1e-10;    // relative parameter step

    /// Pipeline-level switch: fit every per-seed observation instead of the
    /// seed-aggregated means. Off by default.
    bool fit_raw_points = false;
};

enum class Termination { GradientSmall, StepSmall, MaxIterations };

struct FitResult {
    PowerLawCurve curve;
    std::optional<std::int64_t> cutoff; // n_cases filter the fit was run under
    double sse;                         // sum of squared residuals
    double rmse;                        // sqrt(sse / n_points)
    int n_points;                       // distinct n values used
    bool converged;                     // termination != MaxIterations
    int iterations;
    Termination termination;

    /// Set when beta collapsed to the zero bound; gamma is then reported as
    /// the initial guess because any value fits the data equally well.
    bool gamma_unidentifiable;

    // Exit diagnostics backing the optimality certificate.
    double projected_gradient_norm; // infinity norm at the returned point
    double last_step_norm;          // 2-norm of the final projected step
};

/// Jacobian of the model prediction: row i is
/// (d/dalpha, d/dbeta, d/dgamma) of alpha - beta * n_i^(-gamma)
///   = (1, -n_i^(-gamma), beta * n_i^(-gamma) * ln n_i).
Eigen::MatrixX3d jacobian(const PowerLawCurve& curve, std::span<const double> n_values);

/// Bounded nonlinear least squares for (alpha, beta, gamma): damped
/// Gauss-Newton steps with box projection and gain-ratio trust damping.
/// Deterministic: identical inputs give bit-identical results.
/// Requires at least 3 distinct n values, all n >= 1, roc_auc in [0, 1].
FitResult fit(std::span<const FitPoint> points, const FitConfig& config = {});

/// fit() on the subset with n_cases <= cutoff; the result records the cutoff.
FitResult fit_with_cutoff(std::span<const FitPoint> points, std::int64_t cutoff,
                          const FitConfig& config = {});

inline FitResult fit(const std::vector<FitPoint>& points, const FitConfig& config = {}) {
    return fit(std::span<const FitPoint>(points), config);
}
inline FitResult fit_with_cutoff(const std::vector<FitPoint>& points, std::int64_t cutoff,
                                 const FitConfig& config = {}) {
    return fit_with_cutoff(std::span<const FitPoint>(points), cutoff, config);
}

} // namespace lcfit

#endif
