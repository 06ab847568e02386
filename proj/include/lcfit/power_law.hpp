#ifndef LCFIT_POWER_LAW_HPP
#define LCFIT_POWER_LAW_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <string>

#include "lcfit/errors.hpp"

namespace lcfit {

inline constexpr double kAlphaLowerBound = 0.8;
inline constexpr double kAlphaUpperBound = 1.0;

/// Below this, gamma (or the alpha-threshold gap) is treated as degenerate:
/// the closed-form threshold inversion is numerically explosive there.
inline constexpr double kDegeneracyTol = 1e-9;

/// Reporting cap for required sample sizes; estimates beyond it are ">1M".
inline constexpr std::int64_t kDefaultCap = 1'000'000;

/// Saturating power law  roc_auc(n) = alpha - beta * n^(-gamma)  over
/// training sizes n >= 1. alpha is the performance asymptote, beta the
/// deviation scale, gamma the convergence rate. Construction enforces
/// alpha in [0.8, 1.0], beta >= 0, gamma >= 0.
template <typename Scalar>
struct PowerLawCurveT {
    Scalar alpha;
    Scalar beta;
    Scalar gamma;

    PowerLawCurveT(Scalar alpha_, Scalar beta_, Scalar gamma_)
        : alpha(alpha_), beta(beta_), gamma(gamma_) {
        if (!(alpha >= Scalar(kAlphaLowerBound) && alpha <= Scalar(kAlphaUpperBound)))
            throw DomainError("power law: alpha must lie in [0.8, 1.0], got " +
                              std::to_string(static_cast<double>(alpha)));
        if (!(beta >= Scalar(0)))
            throw DomainError("power law: beta must be >= 0, got " +
                              std::to_string(static_cast<double>(beta)));
        if (!(gamma >= Scalar(0)))
            throw DomainError("power law: gamma must be >= 0, got " +
                              std::to_string(static_cast<double>(gamma)));
    }
};

using PowerLawCurve = PowerLawCurveT<double>;

namespace detail {
template <typename Scalar>
void require_training_size(Scalar n) {
    if (!(n >= Scalar(1)))
        throw DomainError("power law: training size n must be >= 1, got " +
                          std::to_string(static_cast<double>(n)));
}
} // namespace detail

/// Predicted ROC-AUC at training size n. Always <= alpha.
template <typename Scalar>
Scalar evaluate(const PowerLawCurveT<Scalar>& curve, Scalar n) {
    detail::require_training_size(n);
    return curve.alpha - curve.beta * std::pow(n, -curve.gamma);
}

inline Eigen::ArrayXd evaluate(const PowerLawCurve& curve, const Eigen::ArrayXd& n) {
    if (n.size() > 0) detail::require_training_size(n.minCoeff());
    return curve.alpha - curve.beta * Eigen::pow(n, -curve.gamma);
}

/// d roc_auc / dn = beta * gamma / n^(gamma+1); zero iff beta*gamma == 0.
template <typename Scalar>
Scalar slope(const PowerLawCurveT<Scalar>& curve, Scalar n) {
    detail::require_training_size(n);
    return curve.beta * curve.gamma * std::pow(n, -(curve.gamma + Scalar(1)));
}

inline Eigen::ArrayXd slope(const PowerLawCurve& curve, const Eigen::ArrayXd& n) {
    if (n.size() > 0) detail::require_training_size(n.minCoeff());
    return curve.beta * curve.gamma * Eigen::pow(n, -(curve.gamma + 1.0));
}

enum class EstimateKind { Finite, AboveCap, Unreachable };

/// Outcome of inverting a fitted curve at a target ROC-AUC: the required
/// number of distinct positive training cases, a kind = AboveCap marker when
/// the analytic solution exceeds the reporting cap, or Unreachable when the
/// asymptote itself sits at or below the target.
struct SampleSizeEstimate {
    EstimateKind kind;
    double n_required; // valid only when kind == Finite; 1 <= n_required <= cap
    std::int64_t cap;

    static SampleSizeEstimate finite(double n, std::int64_t cap) {
        return {EstimateKind::Finite, n, cap};
    }
    static SampleSizeEstimate above_cap(std::int64_t cap) {
        return {EstimateKind::AboveCap, 0.0, cap};
    }
    static SampleSizeEstimate unreachable(std::int64_t cap) {
        return {EstimateKind::Unreachable, 0.0, cap};
    }
};

/// Whole-case reading of a finite estimate: ceil, with a one-part-per-1e9
/// guard so an analytically integral answer that lands at 10 + 1e-14 still
/// reads 10 rather than 11.
inline std::int64_t required_cases(const SampleSizeEstimate& estimate) {
    return static_cast<std::int64_t>(std::ceil(estimate.n_required - 1e-9));
}

/// Smallest n with evaluate(curve, n) >= threshold, computed in closed form
/// as n = (beta / (alpha - threshold))^(1/gamma) and clamped to [1, cap].
/// Degenerate curves (gamma ~ 0, or alpha within kDegeneracyTol of the
/// threshold) report Unreachable rather than an explosive inversion.
inline SampleSizeEstimate n_at_threshold(const PowerLawCurve& curve, double threshold,
                                         std::int64_t cap = kDefaultCap) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw DomainError("n_at_threshold: threshold must lie in (0, 1), got " +
                          std::to_string(threshold));
    if (cap < 1)
        throw DomainError("n_at_threshold: cap must be >= 1, got " + std::to_string(cap));

    const double gap = curve.alpha - threshold;
    if (gap < kDegeneracyTol || curve.gamma < kDegeneracyTol)
        return SampleSizeEstimate::unreachable(cap);

    const double n = std::pow(curve.beta / gap, 1.0 / curve.gamma);
    if (n <= 1.0) return SampleSizeEstimate::finite(1.0, cap);
    if (n > static_cast<double>(cap)) return SampleSizeEstimate::above_cap(cap);
    return SampleSizeEstimate::finite(n, cap);
}

} // namespace lcfit

#endif
