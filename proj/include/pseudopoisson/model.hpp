#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pseudopoisson {

using Count = std::uint64_t;

/// Parameters of the bivariate Pseudo-Poisson model with linear regression
/// function:
///
///     X1 ~ Poisson(lambda1)
///     X2 | X1 = x1 ~ Poisson(lambda2 + lambda3 * x1)
///
/// Valid parameters satisfy lambda1 > 0, lambda2 >= 0, lambda3 >= 0 and
/// lambda2 + lambda3 > 0. The struct itself does not enforce this because fit
/// results may legitimately land on the closed boundary; every distribution
/// function calls `validate()` on entry.
struct ModelParams {
    double lambda1 = 1.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;

    bool valid() const noexcept;
    /// Throws DomainError naming the violated constraint.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

enum class Submodel { Full, EqualRates, ZeroIntercept, Independence };

/// Number of free parameters: 3 for Full, 2 for each restriction.
int parameter_count(Submodel model) noexcept;
std::string_view to_string(Submodel model) noexcept;
/// Accepts the CLI spellings: full, equal-rates, zero-intercept, independence.
Submodel parse_submodel(std::string_view text);

struct CountPair {
    Count x1 = 0;
    Count x2 = 0;
    friend bool operator==(const CountPair&, const CountPair&) = default;
};

/// Non-empty ordered sequence of count pairs.
class Sample {
public:
    explicit Sample(std::vector<CountPair> pairs);

    std::size_t size() const noexcept { return pairs_.size(); }
    std::span<const CountPair> pairs() const noexcept { return pairs_; }
    const CountPair& operator[](std::size_t i) const { return pairs_[i]; }
    auto begin() const noexcept { return pairs_.begin(); }
    auto end() const noexcept { return pairs_.end(); }

    friend bool operator==(const Sample&, const Sample&) = default;

private:
    std::vector<CountPair> pairs_;
};

/// 2x2 symmetric matrix stored by its three distinct entries.
struct SymMatrix2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;

    double operator()(int i, int j) const noexcept {
        if (i == 0 && j == 0) return a11;
        if (i == 1 && j == 1) return a22;
        return a12;
    }
};

struct LogLikelihood {
    double value = 0.0;
    /// False when some pair has zero probability; value is then -infinity.
    bool feasible = true;
};

/// log(k!) without touching global state.
double log_factorial(Count k) noexcept;

/// log P(K = k) for K ~ Poisson(rate), rate >= 0. Poisson(0) is the point
/// mass at 0, so log_poisson_pmf(0, 0) = 0 and log_poisson_pmf(k > 0, 0) = -inf.
double log_poisson_pmf(Count k, double rate) noexcept;
double poisson_pmf(Count k, double rate) noexcept;

double log_joint_pmf(const ModelParams& p, CountPair x);
double joint_pmf(const ModelParams& p, CountPair x);

LogLikelihood log_likelihood(const ModelParams& p, const Sample& s);

/// Joint probability generating function E[t1^X1 t2^X2].
double pgf(const ModelParams& p, double t1, double t2);

/// P(X2 = x2), mixing the conditional Poisson law over X1.
double marginal_pmf_x2(const ModelParams& p, Count x2);

/// Neyman Type A mass function: the X2 marginal when lambda2 = 0, with
/// lambda3 the index of clumping.
double neyman_a_pmf(double lambda1, double lambda3, Count x2);

std::array<double, 2> mean_vector(const ModelParams& p);
SymMatrix2 covariance_matrix(const ModelParams& p);
double correlation(const ModelParams& p);

/// Fisher indices (Var/E) of each margin: (1, 1 + lambda3^2 lambda1 / E[X2]).
std::array<double, 2> dispersion_indices(const ModelParams& p);

/// Generalized dispersion index sqrt(E)^T Cov sqrt(E) / E^T E, in closed form.
double gdi(const ModelParams& p);

namespace detail {

/// Log-likelihood over the closed parameter space (lambda1 > 0, lambda2 >= 0,
/// lambda3 >= 0, possibly lambda2 = lambda3 = 0). Used for boundary fits.
LogLikelihood log_likelihood_closed(const ModelParams& p, const Sample& s) noexcept;

}  // namespace detail

}  // namespace pseudopoisson
