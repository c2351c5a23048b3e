#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "pseudopoisson/model.hpp"
#include "pseudopoisson/sampler.hpp"

namespace pseudopoisson {

enum class Method { Moment, MLE };

std::string_view to_string(Method method) noexcept;
/// Accepts "mom" or "mle".
Method parse_method(std::string_view text);

/// Means, cross-covariance and marginal variances, all with 1/n divisors.
struct SampleMoments {
    std::size_t n = 0;
    double m1 = 0.0;
    double m2 = 0.0;
    double s12 = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
};

SampleMoments sample_moments(const Sample& s);

struct FitResult {
    Submodel model = Submodel::Full;
    ModelParams estimates;
    Method method = Method::MLE;
    std::optional<std::array<double, 3>> se;
    /// -infinity when the data have zero likelihood at the estimates.
    double loglik = 0.0;
    bool converged = true;
    /// Estimate lies on the edge of the closed parameter space (lambda2 = 0
    /// or lambda3 = 0 for the full model, or a degenerate all-zero margin).
    bool boundary = false;
    /// Model correlation evaluated at the estimates.
    double corr_hat = 0.0;
    /// Unclamped moment estimates, present only when clamping occurred.
    std::optional<ModelParams> raw;
    int iterations = 0;
};

/// Method-of-moments fit. Negative raw estimates are clamped to 0 and flagged
/// via `boundary` with the raw triple kept in `raw`.
///
/// Throws NoEstimateError when M1 = 0 for Full, EqualRates or ZeroIntercept.
FitResult mom_fit(const Sample& s, Submodel model);

/// Maximum-likelihood fit. lambda1 = M1 in every model. The submodels have
/// closed forms that coincide with the moment estimates. For the full model
/// the likelihood equations force lambda2 + lambda3 M1 = M2 at the optimum,
/// which leaves a concave one-dimensional search over lambda3 in [0, M2/M1].
///
/// Throws NoEstimateError (M1 = 0), InfeasibleError (ZeroIntercept with a row
/// x1 = 0, x2 > 0) or NonIdentifiableError (Full with constant x1).
FitResult mle_fit(const Sample& s, Submodel model);

FitResult fit(const Sample& s, Submodel model, Method method);

struct BootstrapResult {
    std::array<double, 3> se{};
    std::size_t replicates = 0;
    /// Replicates whose refit threw; excluded from the standard deviations.
    std::size_t failed = 0;
};

inline constexpr std::size_t kDefaultBootstrapReplicates = 500;

/// Nonparametric pairs bootstrap: resample n rows with replacement b times,
/// refit, and report the per-parameter standard deviation (divisor m - 1 over
/// the m successful replicates). Replicate r draws from Rng::substream(seed, r).
///
/// Throws UnreliableBootstrapError when more than 10% of replicates fail.
BootstrapResult bootstrap_se(const Sample& s, Submodel model, Method method, std::size_t b,
                             Seed seed);

}  // namespace pseudopoisson
