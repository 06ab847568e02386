#ifndef LCFIT_SYNTH_HPP
#define LCFIT_SYNTH_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lcfit/experiments.hpp"
#include "lcfit/planner.hpp"
#include "lcfit/power_law.hpp"

namespace lcfit {

/// Recipe for a synthetic experiment campaign drawn from a known curve.
struct SynthSpec {
    PowerLawCurve true_curve;
    SamplingSchedule schedule = SamplingSchedule::standard();
    int n_seeds = 10;
    double noise_sigma = 0.02;
    std::uint64_t rng_seed = 0;
    bool clamp = true; // keep samples inside [0, 1]
};

/// One ROC-AUC sample per (schedule size, seed): the true curve value plus
/// Normal(0, sigma^2) noise. Every draw is independently keyed by
/// (rng_seed, pathology, model, n, seed), so output is a pure function of
/// the arguments and independent of generation order.
std::vector<ExperimentPoint> generate(const SynthSpec& spec, const std::string& pathology,
                                      const std::string& model);

namespace detail {
/// Standard normal draw for one sample key. Exposed for the statistical
/// tests; the uniform-to-normal map is a rational-polynomial inverse CDF
/// built only from +,*,/ and sqrt plus an in-house log, so the stream does
/// not depend on platform libm behavior.
double keyed_standard_normal(std::uint64_t rng_seed, std::string_view pathology,
                             std::string_view model, std::int64_t n, std::int64_t seed);
double inverse_normal_cdf(double p);
} // namespace detail

} // namespace lcfit

#endif
