#include "pseudopoisson/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "pseudopoisson/errors.hpp"

namespace pseudopoisson {

namespace {

constexpr int kMaxProfileIterations = 200;

double corr_at(const ModelParams& p) noexcept {
    const double var2 = p.lambda2 + p.lambda3 * p.lambda1 + p.lambda3 * p.lambda3 * p.lambda1;
    if (!(p.lambda1 > 0.0) || !(var2 > 0.0)) return 0.0;
    return p.lambda1 * p.lambda3 / std::sqrt(p.lambda1 * var2);
}

void finish(FitResult& r, const Sample& s) {
    r.loglik = detail::log_likelihood_closed(r.estimates, s).value;
    r.corr_hat = corr_at(r.estimates);
    if (!r.estimates.valid()) r.boundary = true;
}

void require_positive_m1(const SampleMoments& m, Submodel model, std::string_view method) {
    if (m.m1 > 0.0) return;
    throw NoEstimateError(std::string("estimation: ") + std::string(method) + " fit of " +
                          std::string(to_string(model)) + " model requires M1 > 0");
}

bool zero_intercept_violated(const Sample& s) {
    return std::any_of(s.begin(), s.end(), [](const CountPair& x) { return x.x1 == 0 && x.x2 > 0; });
}

// The profile log-likelihood along lambda2 = M2 - lambda3 M1 is, up to a
// constant, sum_g T_g log(M2 + lambda3 d_g) where g runs over distinct x1
// values, d_g = x1 - M1 and T_g is the total of x2 over the group.
struct Profile {
    double m2 = 0.0;
    std::vector<double> d;
    std::vector<double> t;

    double gradient(double l3) const noexcept {
        double g = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) g += t[i] * d[i] / (m2 + l3 * d[i]);
        return g;
    }
    double curvature(double l3) const noexcept {
        double h = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double den = m2 + l3 * d[i];
            h -= t[i] * d[i] * d[i] / (den * den);
        }
        return h;
    }
};

Profile make_profile(const Sample& s, const SampleMoments& m) {
    std::map<Count, double> totals;
    for (const auto& x : s) totals[x.x1] += static_cast<double>(x.x2);
    Profile prof;
    prof.m2 = m.m2;
    for (const auto& [x1, total] : totals) {
        if (total == 0.0) continue;
        prof.d.push_back(static_cast<double>(x1) - m.m1);
        prof.t.push_back(total);
    }
    return prof;
}

FitResult full_mle(const Sample& s, const SampleMoments& m) {
    require_positive_m1(m, Submodel::Full, "maximum-likelihood");
    if (!(m.v1 > 0.0)) {
        throw NonIdentifiableError(
            "estimation: all x1 values are equal, so lambda2 and lambda3 are not identified");
    }
    FitResult r;
    r.model = Submodel::Full;
    r.method = Method::MLE;
    if (m.m2 == 0.0) {
        r.estimates = {m.m1, 0.0, 0.0};
        r.boundary = true;
        finish(r, s);
        return r;
    }

    const Profile prof = make_profile(s, m);
    const double upper = m.m2 / m.m1;
    const double tol = 1e-10 * static_cast<double>(m.n);
    auto at = [&](double l3, bool boundary) {
        r.estimates = {m.m1, std::max(0.0, m.m2 - l3 * m.m1), l3};
        r.boundary = boundary;
        finish(r, s);
        return r;
    };

    if (prof.gradient(0.0) <= 0.0) return at(0.0, true);
    const bool upper_feasible = !zero_intercept_violated(s);
    if (upper_feasible && prof.gradient(upper) >= 0.0) {
        r.estimates = {m.m1, 0.0, upper};
        r.boundary = true;
        finish(r, s);
        return r;
    }

    // gradient is strictly decreasing: positive at lo, negative at hi
    double lo = 0.0, hi = upper;
    double l3 = 0.5 * (lo + hi);
    int it = 0;
    for (; it < kMaxProfileIterations; ++it) {
        const double g = prof.gradient(l3);
        if (std::fabs(g) <= tol) break;
        (g > 0.0 ? lo : hi) = l3;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
        const double h = prof.curvature(l3);
        double next = h < 0.0 ? l3 - g / h : lo;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        l3 = next;
    }
    if (it == kMaxProfileIterations) {
        throw ConvergenceError("estimation: profile search for lambda3 did not converge");
    }
    r.iterations = it + 1;
    return at(l3, false);
}

}  // namespace

std::string_view to_string(Method method) noexcept {
    return method == Method::Moment ? "mom" : "mle";
}

Method parse_method(std::string_view text) {
    if (text == "mom") return Method::Moment;
    if (text == "mle") return Method::MLE;
    throw DomainError("estimation: unknown method '" + std::string(text) + "'");
}

SampleMoments sample_moments(const Sample& s) {
    SampleMoments m;
    m.n = s.size();
    const double n = static_cast<double>(m.n);
    for (const auto& x : s) {
        m.m1 += static_cast<double>(x.x1);
        m.m2 += static_cast<double>(x.x2);
    }
    m.m1 /= n;
    m.m2 /= n;
    for (const auto& x : s) {
        const double d1 = static_cast<double>(x.x1) - m.m1;
        const double d2 = static_cast<double>(x.x2) - m.m2;
        m.s12 += d1 * d2;
        m.v1 += d1 * d1;
        m.v2 += d2 * d2;
    }
    m.s12 /= n;
    m.v1 /= n;
    m.v2 /= n;
    return m;
}

FitResult mom_fit(const Sample& s, Submodel model) {
    const SampleMoments m = sample_moments(s);
    if (model != Submodel::Independence) require_positive_m1(m, model, "moment");

    FitResult r;
    r.model = model;
    r.method = Method::Moment;
    switch (model) {
        case Submodel::Full: {
            const ModelParams raw{m.m1, m.m2 - m.s12, m.s12 / m.m1};
            r.estimates = {raw.lambda1, std::max(0.0, raw.lambda2), std::max(0.0, raw.lambda3)};
            if (raw.lambda2 < 0.0 || raw.lambda3 < 0.0) {
                r.boundary = true;
                r.raw = raw;
            } else if (raw.lambda2 == 0.0 || raw.lambda3 == 0.0) {
                r.boundary = true;
            }
            break;
        }
        case Submodel::EqualRates: {
            const double l3 = m.m2 / (1.0 + m.m1);
            r.estimates = {m.m1, l3, l3};
            break;
        }
        case Submodel::ZeroIntercept:
            r.estimates = {m.m1, 0.0, m.m2 / m.m1};
            break;
        case Submodel::Independence:
            r.estimates = {m.m1, m.m2, 0.0};
            break;
    }
    finish(r, s);
    return r;
}

FitResult mle_fit(const Sample& s, Submodel model) {
    const SampleMoments m = sample_moments(s);
    if (model == Submodel::Full) return full_mle(s, m);

    require_positive_m1(m, model, "maximum-likelihood");
    if (model == Submodel::ZeroIntercept && zero_intercept_violated(s)) {
        throw InfeasibleError(
            "estimation: zero-intercept model is infeasible, a row has x1 = 0 and x2 > 0");
    }
    FitResult r = mom_fit(s, model);
    r.method = Method::MLE;
    return r;
}

FitResult fit(const Sample& s, Submodel model, Method method) {
    return method == Method::Moment ? mom_fit(s, model) : mle_fit(s, model);
}

BootstrapResult bootstrap_se(const Sample& s, Submodel model, Method method, std::size_t b,
                             Seed seed) {
    if (b < 2) throw DomainError("estimation: bootstrap needs at least 2 replicates");
    fit(s, model, method);

    const std::size_t n = s.size();
    std::vector<std::array<double, 3>> estimates;
    estimates.reserve(b);
    std::size_t failed = 0;
    std::vector<CountPair> rows(n);
    for (std::size_t rep = 0; rep < b; ++rep) {
        Rng rng = Rng::substream(seed, rep);
        for (auto& row : rows) row = s[rng.below(n)];
        try {
            const FitResult f = fit(Sample(rows), model, method);
            estimates.push_back({f.estimates.lambda1, f.estimates.lambda2, f.estimates.lambda3});
        } catch (const Error&) {
            ++failed;
        }
    }
    if (failed * 10 > b || estimates.size() < 2) throw UnreliableBootstrapError(failed, b);

    BootstrapResult out;
    out.replicates = b;
    out.failed = failed;
    const double count = static_cast<double>(estimates.size());
    for (std::size_t k = 0; k < 3; ++k) {
        double mean = 0.0;
        for (const auto& e : estimates) mean += e[k];
        mean /= count;
        double ss = 0.0;
        for (const auto& e : estimates) ss += (e[k] - mean) * (e[k] - mean);
        out.se[k] = std::sqrt(ss / (count - 1.0));
    }
    return out;
}

}  // namespace pseudopoisson
