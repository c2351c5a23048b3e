#include "pseudopoisson/inference.hpp"

#include <cmath>
#include <string>

#include "pseudopoisson/errors.hpp"

namespace pseudopoisson {

namespace {

constexpr double kNegativeStatSlack = 1e-8;

}  // namespace

double chisq1_upper_tail(double x) {
    if (!(x >= 0.0)) throw DomainError("inference: chi-square statistic must be >= 0");
    return std::erfc(std::sqrt(0.5 * x));
}

double log_lambda_closed_form(const Sample& s, Submodel hypothesis, const FitResult& restricted,
                              const FitResult& full) {
    const double n = static_cast<double>(s.size());
    const double l2 = full.estimates.lambda2;
    const double l3 = full.estimates.lambda3;
    double sum_x1 = 0.0;
    for (const auto& x : s) sum_x1 += static_cast<double>(x.x1);

    double value = 0.0;
    switch (hypothesis) {
        case Submodel::EqualRates: {
            const double r3 = restricted.estimates.lambda3;
            value = n * l2 - n * r3 - (r3 - l3) * sum_x1;
            for (const auto& x : s) {
                if (x.x2 == 0) continue;
                const double x1 = static_cast<double>(x.x1);
                value += static_cast<double>(x.x2) * std::log(r3 * (1.0 + x1) / (l2 + l3 * x1));
            }
            break;
        }
        case Submodel::ZeroIntercept: {
            const double r3 = restricted.estimates.lambda3;
            value = n * l2 - (r3 - l3) * sum_x1;
            for (const auto& x : s) {
                if (x.x2 == 0) continue;
                const double x1 = static_cast<double>(x.x1);
                value += static_cast<double>(x.x2) * std::log(r3 * x1 / (l2 + l3 * x1));
            }
            break;
        }
        case Submodel::Independence: {
            const double r2 = restricted.estimates.lambda2;
            value = n * l2 - n * r2 + l3 * sum_x1;
            for (const auto& x : s) {
                if (x.x2 == 0) continue;
                const double x1 = static_cast<double>(x.x1);
                value += static_cast<double>(x.x2) * std::log(r2 / (l2 + l3 * x1));
            }
            break;
        }
        case Submodel::Full:
            throw DomainError("inference: the full model is not a restriction of itself");
    }
    return value;
}

TestResult lrt(const Sample& s, Submodel hypothesis) {
    if (hypothesis == Submodel::Full) {
        throw DomainError("inference: choose a restricted hypothesis (equal-rates, "
                          "zero-intercept or independence)");
    }
    TestResult t;
    t.hypothesis = hypothesis;
    t.restricted_fit = mle_fit(s, hypothesis);
    t.full_fit = mle_fit(s, Submodel::Full);
    t.boundary_hypothesis = hypothesis == Submodel::Independence;

    const double stat = 2.0 * (t.full_fit.loglik - t.restricted_fit.loglik);
    if (!std::isfinite(stat)) {
        throw InfeasibleError("inference: likelihood ratio undefined for " +
                              std::string(to_string(hypothesis)));
    }
    if (stat < -kNegativeStatSlack) {
        throw ConvergenceError("inference: negative likelihood-ratio statistic " +
                               std::to_string(stat) + "; full-model fit did not reach its maximum");
    }
    t.stat = stat < 0.0 ? 0.0 : stat;
    t.pvalue = chisq1_upper_tail(t.stat);
    return t;
}

std::array<double, 2> empirical_dispersion(const Sample& s) {
    if (s.size() < 2) throw DomainError("inference: dispersion index needs n >= 2");
    const SampleMoments m = sample_moments(s);
    if (!(m.m1 > 0.0) || !(m.m2 > 0.0)) {
        throw DomainError("inference: dispersion index undefined when a sample mean is zero");
    }
    return {m.v1 / m.m1, m.v2 / m.m2};
}

}  // namespace pseudopoisson
