#include "sdm/noise.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sdm {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Bridge deviates for building level k use tag k (level-0 increments use
// tag 0); aux deviates live in a disjoint tag range.
constexpr std::uint64_t kAuxTagBase = 0x100000000ull;

// SplitMix64 finalizer (Vigna). Chaining it over the key words and the
// scaled counter gives a stateless, splittable generator.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t stream_base(const RngSeed& key, std::uint64_t tag) {
    std::uint64_t s = mix64(key.seed + kGolden);
    s = mix64(s + key.stream_id);
    return mix64(s + tag);
}

inline std::uint64_t bits_from(std::uint64_t base, std::uint64_t index) {
    return mix64(base + index * kGolden);
}

// Uniform in the open interval (0,1); never returns an endpoint, so the
// quantile transform below stays finite.
inline double to_unit_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

template <std::size_t N>
inline double horner(const double (&c)[N], double x) {
    double r = c[N - 1];
    for (std::size_t i = N - 1; i-- > 0;) r = r * x + c[i];
    return r;
}

inline double normal_from(std::uint64_t base, std::uint64_t index) {
    return inverse_normal_cdf(to_unit_open(bits_from(base, index)));
}

}  // namespace

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("inverse_normal_cdf: p must lie in (0,1), got " +
                                    std::to_string(p));
    }
    // AS241 PPND16 rational approximations (Wichura 1988).
    static constexpr double a[8] = {
        3.3871328727963666080e0,  1.3314166789178437745e2, 1.9715909503065514427e3,
        1.3731693765509461125e4,  4.5921953931549871457e4, 6.7265770927008700853e4,
        3.3430575583588128105e4,  2.5090809287301226727e3};
    static constexpr double b[8] = {
        1.0,                      4.2313330701600911252e1, 6.8718700749205790830e2,
        5.3941960214247511077e3,  2.1213794301586595867e4, 3.9307895800092710610e4,
        2.8729085735721942674e4,  5.2264952788528545610e3};
    static constexpr double c[8] = {
        1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
        3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr double d[8] = {
        1.0,                      2.05319162663775882187e0, 1.67638483018380384940e0,
        6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
        5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static constexpr double e[8] = {
        6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
        2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[8] = {
        1.0,                      5.99832206555887937690e-1, 1.36929880922735805310e-1,
        1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
        1.42151175831644588870e-7, 2.04426310338993978564e-15};

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * horner(a, r) / horner(b, r);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double z;
    if (r <= 5.0) {
        r -= 1.6;
        z = horner(c, r) / horner(d, r);
    } else {
        r -= 5.0;
        z = horner(e, r) / horner(f, r);
    }
    return (q < 0.0) ? -z : z;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

std::uint64_t uniform_bits(const RngSeed& key, std::uint64_t tag, std::uint64_t index) {
    return bits_from(stream_base(key, tag), index);
}

double standard_normal(const RngSeed& key, std::uint64_t tag, std::uint64_t index) {
    return normal_from(stream_base(key, tag), index);
}

BrownianPath BrownianPath::sample(const RngSeed& key, std::size_t n_steps, double dt) {
    if (n_steps == 0) throw std::invalid_argument("BrownianPath::sample: n_steps must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("BrownianPath::sample: dt must be positive");
    BrownianPath path;
    path.key_ = key;
    path.base_dt_ = dt;
    std::vector<double> level0(n_steps);
    const double scale = std::sqrt(dt);
    const std::uint64_t base = stream_base(key, 0);
    for (std::size_t i = 0; i < n_steps; ++i) {
        level0[i] = scale * normal_from(base, i);
    }
    path.levels_.push_back(std::move(level0));
    return path;
}

BrownianPath BrownianPath::from_increments(std::vector<double> increments, double dt,
                                           const RngSeed& key) {
    if (!(dt > 0.0)) throw std::invalid_argument("BrownianPath::from_increments: dt must be positive");
    BrownianPath path;
    path.key_ = key;
    path.base_dt_ = dt;
    path.levels_.push_back(std::move(increments));
    return path;
}

BrownianPath BrownianPath::refined(int target_level) const {
    if (target_level < deepest_level()) {
        throw std::invalid_argument("BrownianPath::refined: target_level below current deepest level");
    }
    if (target_level > 48) {
        throw std::invalid_argument("BrownianPath::refined: target_level too large");
    }
    BrownianPath out = *this;
    for (int level = out.deepest_level() + 1; level <= target_level; ++level) {
        const std::vector<double>& parents = out.levels_.back();
        const double parent_dt = out.dt_at(level - 1);
        // midpoint | parent ~ N(parent/2, parent_dt/4); the sibling closes
        // the sum exactly.
        const double half_sd = 0.5 * std::sqrt(parent_dt);
        std::vector<double> children(parents.size() * 2);
        const std::uint64_t base = stream_base(out.key_, static_cast<std::uint64_t>(level));
        for (std::size_t i = 0; i < parents.size(); ++i) {
            const double first = 0.5 * parents[i] + half_sd * normal_from(base, i);
            children[2 * i] = first;
            children[2 * i + 1] = parents[i] - first;
        }
        out.levels_.push_back(std::move(children));
    }
    return out;
}

std::size_t BrownianPath::steps_at(int level) const {
    if (level < 0 || level > deepest_level()) {
        throw std::invalid_argument("BrownianPath::steps_at: level out of range");
    }
    return levels_[static_cast<std::size_t>(level)].size();
}

double BrownianPath::dt_at(int level) const {
    if (level < 0 || level > deepest_level()) {
        throw std::invalid_argument("BrownianPath::dt_at: level out of range");
    }
    return std::ldexp(base_dt_, -level);
}

std::span<const double> BrownianPath::increments(int level) const {
    if (level < 0 || level > deepest_level()) {
        throw std::invalid_argument("BrownianPath::increments: level out of range");
    }
    return levels_[static_cast<std::size_t>(level)];
}

double BrownianPath::horizon() const {
    return base_dt_ * static_cast<double>(base_steps());
}

double BrownianPath::aux_gaussian(int level, std::uint64_t step) const {
    return standard_normal(key_, kAuxTagBase + static_cast<std::uint64_t>(level), step);
}

BrownianPath sample_increments(const RngSeed& key, std::size_t n_steps, double dt) {
    return BrownianPath::sample(key, n_steps, dt);
}

BrownianPath refine(const BrownianPath& path, int target_level) {
    return path.refined(target_level);
}

}  // namespace sdm
