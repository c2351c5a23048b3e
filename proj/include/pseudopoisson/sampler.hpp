#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pseudopoisson/model.hpp"

namespace pseudopoisson {

struct Seed {
    std::uint64_t value = 0;
};

/// Reproducible random stream: std::mt19937_64 seeded with a single 64-bit
/// word. Uniforms are built from the top 53 bits of each engine output, so
/// the stream is identical on every conforming platform.
class Rng {
public:
    explicit Rng(Seed seed) : engine_(seed.value) {}

    /// Independent stream for replicate `index`, derived from (seed, index)
    /// with splitmix64 so replicates can be generated in any order.
    static Rng substream(Seed seed, std::uint64_t index);

    /// Uniform on [0, 1).
    double uniform() noexcept;
    std::uint64_t next() noexcept { return engine_(); }
    /// Uniform integer on [0, n), n > 0. Uses rejection to avoid modulo bias.
    std::uint64_t below(std::uint64_t n) noexcept;

private:
    std::mt19937_64 engine_;
};

/// Exact Poisson(rate) variate: cdf inversion for rate < 30, Hormann's
/// transformed rejection (PTRS) above. rate = 0 returns 0 without consuming
/// randomness.
Count poisson_draw(double rate, Rng& rng);

/// n pairs from the two-step construction: x1 ~ Poisson(lambda1), then
/// x2 ~ Poisson(lambda2 + lambda3 x1).
Sample sample_bivariate(const ModelParams& p, std::size_t n, Seed seed);
Sample sample_bivariate(const ModelParams& p, std::size_t n, Rng& rng);

/// Conditional rate of level l as an affine function of the previous levels.
struct LinearLink {
    double intercept = 0.0;
    std::vector<double> coefficients;
};

/// k-dimensional Pseudo-Poisson with linear links; links[i] drives level i+2
/// and must carry i+1 coefficients.
struct KdimSpec {
    double lambda1 = 1.0;
    std::vector<LinearLink> links;

    std::size_t dimension() const noexcept { return links.size() + 1; }
    /// Throws DomainError on a malformed specification.
    void validate() const;
};

/// Rows are k-tuples. For k = 2 the draw order matches sample_bivariate, so
/// the same seed yields the same pairs.
std::vector<std::vector<Count>> sample_kdim(const KdimSpec& spec, std::size_t n, Seed seed);

}  // namespace pseudopoisson
