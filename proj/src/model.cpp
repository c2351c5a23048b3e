#include "pseudopoisson/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pseudopoisson/errors.hpp"

namespace pseudopoisson {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Relative size below which a series term is negligible against the partial sum.
constexpr double kSeriesRelTol = 1e-14;
constexpr Count kSeriesMaxTerms = 10'000'000;

// Online log-sum-exp accumulator.
class LogSum {
public:
    void add(double log_term) noexcept {
        if (log_term == kNegInf) return;
        if (log_term <= max_) {
            sum_ += std::exp(log_term - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
            max_ = log_term;
        }
    }
    double value() const noexcept { return max_ == kNegInf ? kNegInf : max_ + std::log(sum_); }

private:
    double max_ = kNegInf;
    double sum_ = 0.0;
};

// Sums exp(log_term(j)) for j = 0, 1, ... in the log domain. Stops once the
// index is past `turnover` and the current term is below kSeriesRelTol times
// the running sum. The summands used here are log-concave in j, so once a term
// is that small relative to the sum the tail is geometric.
template <typename LogTerm>
double log_series(LogTerm&& log_term, double turnover) {
    LogSum acc;
    const double log_tol = std::log(kSeriesRelTol);
    for (Count j = 0; j < kSeriesMaxTerms; ++j) {
        const double lt = log_term(j);
        acc.add(lt);
        const double partial = acc.value();
        if (static_cast<double>(j) > turnover && partial != kNegInf && lt < log_tol + partial) {
            return partial;
        }
    }
    throw ConvergenceError("model_core: series did not converge within " +
                           std::to_string(kSeriesMaxTerms) + " terms");
}

}  // namespace

bool ModelParams::valid() const noexcept {
    return std::isfinite(lambda1) && std::isfinite(lambda2) && std::isfinite(lambda3) &&
           lambda1 > 0.0 && lambda2 >= 0.0 && lambda3 >= 0.0 && lambda2 + lambda3 > 0.0;
}

void ModelParams::validate() const {
    if (valid()) return;
    std::ostringstream msg;
    msg << "model_core: invalid parameters (" << lambda1 << ", " << lambda2 << ", " << lambda3
        << "): ";
    if (!std::isfinite(lambda1) || !std::isfinite(lambda2) || !std::isfinite(lambda3)) {
        msg << "parameters must be finite";
    } else if (!(lambda1 > 0.0)) {
        msg << "lambda1 must be > 0";
    } else if (lambda2 < 0.0 || lambda3 < 0.0) {
        msg << "lambda2 and lambda3 must be >= 0";
    } else {
        msg << "lambda2 + lambda3 must be > 0";
    }
    throw DomainError(msg.str());
}

int parameter_count(Submodel model) noexcept { return model == Submodel::Full ? 3 : 2; }

std::string_view to_string(Submodel model) noexcept {
    switch (model) {
        case Submodel::Full: return "full";
        case Submodel::EqualRates: return "equal-rates";
        case Submodel::ZeroIntercept: return "zero-intercept";
        case Submodel::Independence: return "independence";
    }
    return "unknown";
}

Submodel parse_submodel(std::string_view text) {
    if (text == "full") return Submodel::Full;
    if (text == "equal-rates") return Submodel::EqualRates;
    if (text == "zero-intercept") return Submodel::ZeroIntercept;
    if (text == "independence") return Submodel::Independence;
    throw DomainError("model_core: unknown submodel '" + std::string(text) + "'");
}

Sample::Sample(std::vector<CountPair> pairs) : pairs_(std::move(pairs)) {
    if (pairs_.empty()) throw DomainError("model_core: sample must contain at least one pair");
}

double log_factorial(Count k) noexcept {
    const double x = static_cast<double>(k) + 1.0;
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

double log_poisson_pmf(Count k, double rate) noexcept {
    if (rate == 0.0) return k == 0 ? 0.0 : kNegInf;
    return static_cast<double>(k) * std::log(rate) - rate - log_factorial(k);
}

double poisson_pmf(Count k, double rate) noexcept { return std::exp(log_poisson_pmf(k, rate)); }

double log_joint_pmf(const ModelParams& p, CountPair x) {
    p.validate();
    const double rate2 = p.lambda2 + p.lambda3 * static_cast<double>(x.x1);
    return log_poisson_pmf(x.x1, p.lambda1) + log_poisson_pmf(x.x2, rate2);
}

double joint_pmf(const ModelParams& p, CountPair x) { return std::exp(log_joint_pmf(p, x)); }

LogLikelihood detail::log_likelihood_closed(const ModelParams& p, const Sample& s) noexcept {
    double total = 0.0;
    for (const auto& x : s) {
        const double rate2 = p.lambda2 + p.lambda3 * static_cast<double>(x.x1);
        const double term = log_poisson_pmf(x.x1, p.lambda1) + log_poisson_pmf(x.x2, rate2);
        if (term == kNegInf) return {kNegInf, false};
        total += term;
    }
    return {total, true};
}

LogLikelihood log_likelihood(const ModelParams& p, const Sample& s) {
    p.validate();
    return detail::log_likelihood_closed(p, s);
}

double pgf(const ModelParams& p, double t1, double t2) {
    p.validate();
    const double inner = t1 * std::exp(p.lambda3 * (t2 - 1.0)) - 1.0;
    return std::exp(p.lambda2 * (t2 - 1.0) + p.lambda1 * inner);
}

double marginal_pmf_x2(const ModelParams& p, Count x2) {
    p.validate();
    const double turnover =
        std::max({p.lambda1 * std::exp(-p.lambda3), static_cast<double>(x2), p.lambda1}) + 10.0;
    auto term = [&](Count x1) {
        const double rate2 = p.lambda2 + p.lambda3 * static_cast<double>(x1);
        return log_poisson_pmf(x1, p.lambda1) + log_poisson_pmf(x2, rate2);
    };
    return std::exp(log_series(term, turnover));
}

double neyman_a_pmf(double lambda1, double lambda3, Count x2) {
    if (!(lambda1 > 0.0) || !(lambda3 > 0.0) || !std::isfinite(lambda1) || !std::isfinite(lambda3)) {
        throw DomainError("model_core: Neyman Type A requires lambda1 > 0 and lambda3 > 0");
    }
    const double log_a = std::log(lambda1) - lambda3;
    const double x2d = static_cast<double>(x2);
    // j^x2 with 0^0 = 1
    auto term = [&](Count j) {
        if (j == 0) return x2 == 0 ? 0.0 : kNegInf;
        const double jd = static_cast<double>(j);
        return jd * log_a + x2d * std::log(jd) - log_factorial(j);
    };
    const double turnover = std::max({lambda1 * std::exp(-lambda3), x2d, lambda1}) + 10.0;
    const double log_sum = log_series(term, turnover);
    return std::exp(-lambda1 + x2d * std::log(lambda3) - log_factorial(x2) + log_sum);
}

std::array<double, 2> mean_vector(const ModelParams& p) {
    p.validate();
    return {p.lambda1, p.lambda2 + p.lambda3 * p.lambda1};
}

SymMatrix2 covariance_matrix(const ModelParams& p) {
    p.validate();
    const double l1 = p.lambda1, l2 = p.lambda2, l3 = p.lambda3;
    return {l1, l1 * l3, l2 + l3 * l1 + l3 * l3 * l1};
}

double correlation(const ModelParams& p) {
    const SymMatrix2 cov = covariance_matrix(p);
    return cov.a12 / std::sqrt(cov.a11 * cov.a22);
}

std::array<double, 2> dispersion_indices(const ModelParams& p) {
    p.validate();
    const double mean2 = p.lambda2 + p.lambda3 * p.lambda1;
    if (!(mean2 > 0.0)) throw DomainError("model_core: E[X2] must be positive");
    return {1.0, 1.0 + p.lambda3 * p.lambda3 * p.lambda1 / mean2};
}

double gdi(const ModelParams& p) {
    p.validate();
    const double l1 = p.lambda1, l3 = p.lambda3;
    const double mean2 = p.lambda2 + l3 * l1;
    const double excess = 2.0 * std::pow(l1, 1.5) * l3 * std::sqrt(mean2) + mean2 * l3 * l3 * l1;
    return 1.0 + excess / (l1 * l1 + mean2 * mean2);
}

}  // namespace pseudopoisson
