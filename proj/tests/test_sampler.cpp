#include "pseudopoisson/sampler.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pseudopoisson/errors.hpp"

using namespace pseudopoisson;
using Catch::Matchers::WithinAbs;

namespace {

struct ColumnStats {
    double mean = 0, var = 0;
};

template <typename Get>
ColumnStats column_stats(std::size_t n, Get&& get) {
    ColumnStats st;
    for (std::size_t i = 0; i < n; ++i) st.mean += get(i);
    st.mean /= double(n);
    for (std::size_t i = 0; i < n; ++i) st.var += (get(i) - st.mean) * (get(i) - st.mean);
    st.var /= double(n);
    return st;
}

template <typename GetA, typename GetB>
double sample_corr(std::size_t n, GetA&& a, GetB&& b) {
    const auto sa = column_stats(n, a), sb = column_stats(n, b);
    double c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (a(i) - sa.mean) * (b(i) - sb.mean);
    return c / double(n) / std::sqrt(sa.var * sb.var);
}

// Pearson statistic for counts against Poisson(rate), pooling everything
// below `lo` and at or above `hi` into the two end bins.
double chi_square(const std::vector<Count>& draws, double rate, Count lo, Count hi) {
    std::vector<double> observed(hi - lo + 1, 0.0);
    for (Count k : draws) {
        const Count b = k <= lo ? 0 : (k >= hi ? hi - lo : k - lo);
        observed[b] += 1;
    }
    std::vector<double> prob(observed.size(), 0.0);
    double below = 0;
    for (Count k = 0; k <= lo; ++k) below += poisson_pmf(k, rate);
    prob[0] = below;
    double used = below;
    for (Count k = lo + 1; k < hi; ++k) {
        prob[k - lo] = poisson_pmf(k, rate);
        used += prob[k - lo];
    }
    prob.back() = 1.0 - used;
    double stat = 0;
    const double n = double(draws.size());
    for (std::size_t b = 0; b < observed.size(); ++b) {
        const double e = n * prob[b];
        stat += (observed[b] - e) * (observed[b] - e) / e;
    }
    return stat;
}

}  // namespace

TEST_CASE("poisson_draw edge cases", "[sampler]") {
    Rng rng(Seed{1});
    for (int i = 0; i < 100; ++i) CHECK(poisson_draw(0.0, rng) == 0);
    CHECK_THROWS_AS(poisson_draw(-1.0, rng), DomainError);
    CHECK_THROWS_AS(poisson_draw(NAN, rng), DomainError);
}

TEST_CASE("poisson_draw mean at rate 4", "[sampler]") {
    Rng rng(Seed{42});
    const std::size_t n = 1'000'000;
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += double(poisson_draw(4.0, rng));
    CHECK_THAT(sum / double(n), WithinAbs(4.0, 3 * 2e-3));
}

TEST_CASE("poisson_draw is deterministic for a fixed seed", "[sampler]") {
    Rng a(Seed{99}), b(Seed{99});
    for (double rate : {0.5, 3.0, 29.9, 30.0, 250.0, 1e6}) {
        for (int i = 0; i < 50; ++i) CHECK(poisson_draw(rate, a) == poisson_draw(rate, b));
    }
}

TEST_CASE("poisson_draw goodness of fit on both algorithm branches", "[sampler]") {
    const std::size_t n = 100'000;
    Rng rng(Seed{2718});
    std::vector<Count> small(n), large(n);
    for (auto& k : small) k = poisson_draw(1.0, rng);
    for (auto& k : large) k = poisson_draw(50.0, rng);
    // chi-square 0.999 quantiles for 7 and 30 degrees of freedom
    CHECK(chi_square(small, 1.0, 0, 7) < 24.3219);
    CHECK(chi_square(large, 50.0, 35, 65) < 59.7031);

    Rng r(Seed{5});
    std::vector<double> big(20000);
    for (auto& k : big) k = double(poisson_draw(1e6, r));
    const auto huge = column_stats(big.size(), [&](std::size_t i) { return big[i]; });
    CHECK_THAT(huge.mean, WithinAbs(1e6, 4 * std::sqrt(1e6 / 20000)));
    CHECK_THAT(huge.var / 1e6, WithinAbs(1.0, 0.05));
}

TEST_CASE("substreams are reproducible and distinct", "[sampler]") {
    Rng a = Rng::substream(Seed{7}, 3), b = Rng::substream(Seed{7}, 3), c = Rng::substream(Seed{7}, 4);
    const auto va = a.next(), vb = b.next(), vc = c.next();
    CHECK(va == vb);
    CHECK(va != vc);
    Rng r(Seed{1});
    for (int i = 0; i < 1000; ++i) CHECK(r.below(7) < 7);
}

TEST_CASE("sample_bivariate laws", "[sampler]") {
    SECTION("independence case has no correlation") {
        const Sample s = sample_bivariate({1, 3, 0}, 10'000, Seed{1});
        const double r = sample_corr(s.size(), [&](std::size_t i) { return double(s[i].x1); },
                                     [&](std::size_t i) { return double(s[i].x2); });
        CHECK(std::fabs(r) < 0.05);
    }
    SECTION("means at (1,3,4)") {
        const Sample s = sample_bivariate({1, 3, 4}, 10'000, Seed{2});
        const auto a = column_stats(s.size(), [&](std::size_t i) { return double(s[i].x1); });
        const auto b = column_stats(s.size(), [&](std::size_t i) { return double(s[i].x2); });
        CHECK_THAT(a.mean, WithinAbs(1.0, 0.05));
        CHECK_THAT(b.mean, WithinAbs(7.0, 0.2));
    }
    SECTION("determinism") {
        CHECK(sample_bivariate({1, 3, 4}, 500, Seed{77}) == sample_bivariate({1, 3, 4}, 500, Seed{77}));
        CHECK_FALSE(sample_bivariate({1, 3, 4}, 500, Seed{77}) == sample_bivariate({1, 3, 4}, 500, Seed{78}));
    }
    SECTION("errors") {
        CHECK_THROWS_AS(sample_bivariate({1, 3, 4}, 0, Seed{1}), DomainError);
        CHECK_THROWS_AS(sample_bivariate({0, 3, 4}, 10, Seed{1}), DomainError);
    }
}

TEST_CASE("sample_bivariate X1 marginal passes chi-square", "[sampler]") {
    const Sample s = sample_bivariate({1, 3, 4}, 100'000, Seed{31337});
    std::vector<Count> x1;
    for (const auto& x : s) x1.push_back(x.x1);
    CHECK(chi_square(x1, 1.0, 0, 7) < 24.3219);
}

TEST_CASE("sample_bivariate covariance converges", "[sampler]") {
    const ModelParams p{1, 3, 4};
    const Sample s = sample_bivariate(p, 100'000, Seed{4242});
    const std::size_t n = s.size();
    auto x1 = [&](std::size_t i) { return double(s[i].x1); };
    auto x2 = [&](std::size_t i) { return double(s[i].x2); };
    const auto a = column_stats(n, x1), b = column_stats(n, x2);
    // standard error of each second-moment estimate from the sample itself
    auto check_moment = [&](auto&& prod, double target) {
        const auto st = column_stats(n, prod);
        CHECK_THAT(st.mean, WithinAbs(target, 3 * std::sqrt(st.var / double(n))));
    };
    const auto cov = covariance_matrix(p);
    check_moment([&](std::size_t i) { return (x1(i) - a.mean) * (x1(i) - a.mean); }, cov.a11);
    check_moment([&](std::size_t i) { return (x1(i) - a.mean) * (x2(i) - b.mean); }, cov.a12);
    check_moment([&](std::size_t i) { return (x2(i) - b.mean) * (x2(i) - b.mean); }, cov.a22);
}

TEST_CASE("sample_kdim", "[sampler]") {
    SECTION("k = 2 reproduces the bivariate stream") {
        const KdimSpec spec{1.0, {{3.0, {4.0}}}};
        const auto rows = sample_kdim(spec, 1000, Seed{9});
        const Sample s = sample_bivariate({1, 3, 4}, 1000, Seed{9});
        REQUIRE(rows.size() == s.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(rows[i][0] == s[i].x1);
            CHECK(rows[i][1] == s[i].x2);
        }
    }
    SECTION("zero coefficients give independent columns") {
        const KdimSpec spec{2.0, {{3.0, {0.0}}, {1.5, {0.0, 0.0}}}};
        const auto rows = sample_kdim(spec, 10'000, Seed{10});
        for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
            const double r = sample_corr(rows.size(), [&](std::size_t k) { return double(rows[k][i]); },
                                         [&](std::size_t k) { return double(rows[k][j]); });
            CHECK(std::fabs(r) < 0.05);
        }
    }
    SECTION("tower-rule mean of X3") {
        const KdimSpec spec{1.0, {{3.0, {4.0}}, {0.0, {0.0, 2.0}}}};
        const auto rows = sample_kdim(spec, 100'000, Seed{11});
        const auto st = column_stats(rows.size(), [&](std::size_t k) { return double(rows[k][2]); });
        // Var(X3) = E[2 X2] + 4 Var(X2) = 14 + 92
        CHECK_THAT(st.mean, WithinAbs(14.0, 3 * std::sqrt(106.0 / 1e5)));
    }
    SECTION("malformed specs") {
        CHECK_THROWS_AS(sample_kdim({1.0, {{3.0, {4.0, 1.0}}}}, 10, Seed{1}), DomainError);
        CHECK_THROWS_AS(sample_kdim({1.0, {{3.0, {4.0}}, {1.0, {1.0}}}}, 10, Seed{1}), DomainError);
        CHECK_THROWS_AS(sample_kdim({1.0, {}}, 10, Seed{1}), DomainError);
        CHECK_THROWS_AS(sample_kdim({1.0, {{0.0, {0.0}}}}, 10, Seed{1}), DomainError);
        CHECK_THROWS_AS(sample_kdim({1.0, {{-1.0, {2.0}}}}, 10, Seed{1}), DomainError);
    }
}
