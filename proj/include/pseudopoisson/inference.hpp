#pragma once

#include <array>

#include "pseudopoisson/estimation.hpp"
#include "pseudopoisson/model.hpp"

namespace pseudopoisson {

/// Generalized likelihood-ratio test of a nested submodel against the full model.
struct TestResult {
    Submodel hypothesis = Submodel::EqualRates;
    /// -2 log Lambda = 2 (loglik_full - loglik_restricted).
    double stat = 0.0;
    double pvalue = 1.0;
    int df = 1;
    FitResult restricted_fit;
    FitResult full_fit;
    /// H0: lambda3 = 0 sits on the boundary of the parameter space, where the
    /// chi-square(1) reference is only approximate.
    bool boundary_hypothesis = false;
};

/// P(chi-square(1) > x) = erfc(sqrt(x / 2)).
double chisq1_upper_tail(double x);

/// Throws DomainError for hypothesis = Full, InfeasibleError when the
/// restricted model cannot be fitted, NoEstimateError when M1 = 0 and
/// ConvergenceError when the statistic comes out below -1e-8.
TestResult lrt(const Sample& s, Submodel hypothesis);

/// log Lambda written directly in terms of the fitted rates, without the
/// factorial constants. Agrees with loglik_restricted - loglik_full.
double log_lambda_closed_form(const Sample& s, Submodel hypothesis, const FitResult& restricted,
                              const FitResult& full);

/// Per-margin variance-to-mean ratios (v1 / M1, v2 / M2), 1/n divisors.
/// Throws DomainError when n < 2 or either sample mean is zero.
std::array<double, 2> empirical_dispersion(const Sample& s);

}  // namespace pseudopoisson
