#include "pseudopoisson/sampler.hpp"

#include <cmath>
#include <string>

#include "pseudopoisson/errors.hpp"

namespace pseudopoisson {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr double kInversionLimit = 30.0;

Count poisson_inversion(double rate, Rng& rng) {
    const double u = rng.uniform();
    double p = std::exp(-rate);
    double cdf = p;
    Count k = 0;
    while (u > cdf) {
        ++k;
        p *= rate / static_cast<double>(k);
        cdf += p;
        // rounding can leave the accumulated cdf a hair below 1
        if (p < 1e-300 && static_cast<double>(k) > rate) break;
    }
    return k;
}

// Hormann (1993), "The transformed rejection method for generating Poisson
// random variables", algorithm PTRS. Valid for rate >= 10.
Count poisson_ptrs(double rate, Rng& rng) {
    const double slam = std::sqrt(rate);
    const double loglam = std::log(rate);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::fabs(u);
        if (us <= 0.0) continue;
        const double kd = std::floor((2.0 * a / us + b) * u + rate + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<Count>(kd);
        if (kd < 0.0 || (us < 0.013 && v > us)) continue;
        const Count k = static_cast<Count>(kd);
        const double lhs = std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b);
        const double rhs = -rate + kd * loglam - log_factorial(k);
        if (lhs <= rhs) return k;
    }
}

}  // namespace

Rng Rng::substream(Seed seed, std::uint64_t index) {
    std::uint64_t state = seed.value;
    const std::uint64_t a = splitmix64(state);
    state = a ^ (index * 0xd1b54a32d192ed03ULL);
    return Rng(Seed{splitmix64(state)});
}

double Rng::uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) noexcept {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = engine_();
        if (r >= threshold) return r % n;
    }
}

Count poisson_draw(double rate, Rng& rng) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw DomainError("sampler: Poisson rate must be finite and >= 0, got " +
                          std::to_string(rate));
    }
    if (rate == 0.0) return 0;
    return rate < kInversionLimit ? poisson_inversion(rate, rng) : poisson_ptrs(rate, rng);
}

Sample sample_bivariate(const ModelParams& p, std::size_t n, Rng& rng) {
    p.validate();
    if (n == 0) throw DomainError("sampler: sample size must be >= 1");
    std::vector<CountPair> pairs;
    pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Count x1 = poisson_draw(p.lambda1, rng);
        const Count x2 = poisson_draw(p.lambda2 + p.lambda3 * static_cast<double>(x1), rng);
        pairs.push_back({x1, x2});
    }
    return Sample(std::move(pairs));
}

Sample sample_bivariate(const ModelParams& p, std::size_t n, Seed seed) {
    Rng rng(seed);
    return sample_bivariate(p, n, rng);
}

void KdimSpec::validate() const {
    if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) {
        throw DomainError("sampler: lambda1 must be finite and > 0");
    }
    if (links.empty()) throw DomainError("sampler: k-dimensional spec needs k >= 2");
    for (std::size_t i = 0; i < links.size(); ++i) {
        const auto& link = links[i];
        const std::string level = "level " + std::to_string(i + 2);
        if (link.coefficients.size() != i + 1) {
            throw DomainError("sampler: " + level + " link needs " + std::to_string(i + 1) +
                              " coefficients, got " + std::to_string(link.coefficients.size()));
        }
        double total = link.intercept;
        if (!(link.intercept >= 0.0)) throw DomainError("sampler: " + level + " intercept < 0");
        for (double c : link.coefficients) {
            if (!(c >= 0.0) || !std::isfinite(c)) {
                throw DomainError("sampler: " + level + " has a negative or non-finite coefficient");
            }
            total += c;
        }
        if (!(total > 0.0)) throw DomainError("sampler: " + level + " link is identically zero");
    }
}

std::vector<std::vector<Count>> sample_kdim(const KdimSpec& spec, std::size_t n, Seed seed) {
    spec.validate();
    if (n == 0) throw DomainError("sampler: sample size must be >= 1");
    Rng rng(seed);
    const std::size_t k = spec.dimension();
    std::vector<std::vector<Count>> rows(n, std::vector<Count>(k));
    for (auto& row : rows) {
        row[0] = poisson_draw(spec.lambda1, rng);
        for (std::size_t level = 1; level < k; ++level) {
            const auto& link = spec.links[level - 1];
            double rate = link.intercept;
            for (std::size_t j = 0; j < level; ++j) {
                rate += link.coefficients[j] * static_cast<double>(row[j]);
            }
            row[level] = poisson_draw(rate, rng);
        }
    }
    return rows;
}

}  // namespace pseudopoisson
