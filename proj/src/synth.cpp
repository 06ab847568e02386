#include "lcfit/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "lcfit/errors.hpp"

namespace lcfit {

namespace {

std::string lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// ln(x) for finite x > 0 via frexp reduction and the atanh series, written
// with a fixed operation sequence so results are identical on any IEEE-754
// double platform.
double portable_log(double x) {
    int exponent = 0;
    double mantissa = std::frexp(x, &exponent); // in [0.5, 1)
    if (mantissa < 0.70710678118654752440) {
        mantissa *= 2.0;
        exponent -= 1;
    }
    const double z = (mantissa - 1.0) / (mantissa + 1.0);
    const double z2 = z * z;
    double term = z;
    double sum = 0.0;
    for (int k = 0; k < 14; ++k) {
        sum += term / static_cast<double>(2 * k + 1);
        term *= z2;
    }
    return 2.0 * sum + static_cast<double>(exponent) * 0.6931471805599453094172321214581766;
}

double rational(const double (&num)[8], const double (&den)[8], double r) {
    double p = 0.0, q = 0.0;
    for (int i = 7; i >= 0; --i) {
        p = p * r + num[i];
        q = q * r + den[i];
    }
    return p / q;
}

} // namespace

namespace detail {

// Wichura's AS241 PPND16 rational approximation of the standard normal
// quantile, accurate to ~1e-15 over (0, 1).
double inverse_normal_cdf(double p) {
    static constexpr double kCentral[8] = {
        3.3871328727963666080e0,  1.3314166789178437745e2, 1.9715909503065514427e3,
        1.3731693765509461125e4,  4.5921953931549871457e4, 6.7265770927008700853e4,
        3.3430575583588128105e4,  2.5090809287301226727e3};
    static constexpr double kCentralDen[8] = {
        1.0,                      4.2313330701600911252e1, 6.8718700749205790830e2,
        5.3941960214247511077e3,  2.1213794301586595867e4, 3.9307895800092710610e4,
        2.8729085735721942674e4,  5.2264952788528545610e3};
    static constexpr double kTail[8] = {
        1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
        3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr double kTailDen[8] = {
        1.0,                      2.05319162663775882187e0, 1.67638483018380384940e0,
        6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
        5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static constexpr double kFarTail[8] = {
        6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
        2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double kFarTailDen[8] = {
        1.0,                      5.99832206555887937690e-1, 1.36929880922735805310e-1,
        1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
        1.42151175831644588870e-7, 2.04426310338993978564e-15};

    if (!(p > 0.0 && p < 1.0))
        throw DomainError("inverse_normal_cdf: p must lie in (0, 1)");

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * rational(kCentral, kCentralDen, r);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-portable_log(r));
    double z;
    if (r <= 5.0) {
        z = rational(kTail, kTailDen, r - 1.6);
    } else {
        z = rational(kFarTail, kFarTailDen, r - 5.0);
    }
    return q < 0.0 ? -z : z;
}

double keyed_standard_normal(std::uint64_t rng_seed, std::string_view pathology,
                             std::string_view model, std::int64_t n, std::int64_t seed) {
    std::uint64_t k = mix64(rng_seed + 0x9e3779b97f4a7c15ULL);
    k = mix64(k ^ fnv1a(pathology));
    k = mix64(k ^ fnv1a(model));
    k = mix64(k ^ static_cast<std::uint64_t>(n));
    k = mix64(k ^ static_cast<std::uint64_t>(seed));
    // odd 53-bit numerator, so u is symmetric in (0, 1) and never hits 0 or 1
    const std::uint64_t numerator = ((mix64(k) >> 12) << 1) | 1ULL;
    const double u = static_cast<double>(numerator) * 0x1.0p-53;
    return inverse_normal_cdf(u);
}

} // namespace detail

std::vector<ExperimentPoint> generate(const SynthSpec& spec, const std::string& pathology_raw,
                                      const std::string& model_raw) {
    if (spec.n_seeds < 1)
        throw DomainError("generate: n_seeds must be >= 1, got " + std::to_string(spec.n_seeds));
    if (!(spec.noise_sigma >= 0.0))
        throw DomainError("generate: noise_sigma must be >= 0");

    // Identifiers are lower-case throughout the pipeline (ingest normalizes
    // too); hashing the normalized form keeps the noise stream independent of
    // the caller's spelling.
    const std::string pathology = lower(pathology_raw);
    const std::string model = lower(model_raw);

    std::vector<ExperimentPoint> points;
    points.reserve(spec.schedule.sizes.size() * static_cast<std::size_t>(spec.n_seeds));
    for (const std::int64_t n : spec.schedule.sizes) {
        const double mean = evaluate(spec.true_curve, static_cast<double>(n));
        for (int seed = 0; seed < spec.n_seeds; ++seed) {
            double value = mean;
            if (spec.noise_sigma > 0.0) {
                value += spec.noise_sigma *
                         detail::keyed_standard_normal(spec.rng_seed, pathology, model, n, seed);
            }
            if (spec.clamp) value = std::clamp(value, 0.0, 1.0);
            points.push_back({pathology, model, n, seed, value});
        }
    }
    return points;
}

} // namespace lcfit
