#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sdm {

/// Identifies one reproducible random stream. Equal (seed, stream_id) pairs
/// always yield identical draws; distinct stream_ids give statistically
/// independent streams, so Monte Carlo paths can be generated in any order
/// and on any number of workers without changing the results.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

/// Standard normal quantile function (Wichura's AS241, full double accuracy).
/// Throws std::invalid_argument unless 0 < p < 1.
double inverse_normal_cdf(double p);

/// Standard normal CDF.
double normal_cdf(double x);

/// Counter-based uniform generator: the output is a pure function of
/// (key, tag, index), with no sequential state.
std::uint64_t uniform_bits(const RngSeed& key, std::uint64_t tag, std::uint64_t index);

/// N(0,1) deviate via inverse-CDF transform of uniform_bits.
double standard_normal(const RngSeed& key, std::uint64_t tag, std::uint64_t index);

/// Brownian increments on a uniform grid with dyadic refinement levels.
///
/// Level k holds n0 * 2^k increments of step dt0 / 2^k. Every level-k
/// increment equals the sum of its two level-(k+1) children exactly (up to
/// one floating-point addition); children come from Brownian-bridge midpoint
/// conditioning, midpoint | parent ~ N(parent/2, dt_parent/4). Refining to
/// level m and reading level k < m gives the same numbers as refining to
/// level k directly, because every bridge deviate is addressed by
/// (child level, parent index) in the counter generator.
///
/// A constructed path is immutable and safe to read from several threads.
class BrownianPath {
public:
    /// n_steps independent N(0, dt) increments at level 0.
    static BrownianPath sample(const RngSeed& key, std::size_t n_steps, double dt);

    /// Wraps externally supplied increments (tests, zeroed paths). The key
    /// is only used if the path is later refined or asked for aux deviates.
    static BrownianPath from_increments(std::vector<double> increments, double dt,
                                        const RngSeed& key = RngSeed{});

    /// Copy of this path extended to target_level. Requires
    /// target_level >= deepest_level().
    BrownianPath refined(int target_level) const;

    int deepest_level() const { return static_cast<int>(levels_.size()) - 1; }
    std::size_t steps_at(int level) const;
    double dt_at(int level) const;
    std::span<const double> increments(int level) const;

    double base_dt() const { return base_dt_; }
    std::size_t base_steps() const { return levels_.front().size(); }
    double horizon() const;
    const RngSeed& key() const { return key_; }

    /// Auxiliary per-step N(0,1) deviates, independent of the increments
    /// (exact transition sampling consumes one per step).
    double aux_gaussian(int level, std::uint64_t step) const;

private:
    BrownianPath() = default;

    RngSeed key_{};
    double base_dt_ = 0.0;
    std::vector<std::vector<double>> levels_;
};

/// Level-0 sampling; rejects n_steps == 0 and dt <= 0.
BrownianPath sample_increments(const RngSeed& key, std::size_t n_steps, double dt);

/// Refinement by bridge conditioning; see BrownianPath::refined.
BrownianPath refine(const BrownianPath& path, int target_level);

}  // namespace sdm
