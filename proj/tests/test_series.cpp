#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cstab/series.hpp"

using namespace cstab;

namespace {

// Closed forms for the coefficients of the gamma=1/2 candidate normalizer
//   Q_n(z) = (1/a)(1 - ((1-1/n) sqrt(1-a) + (1/n) sqrt(1-a z))^2),
// used as the independent oracle for the series engine.
double qn_b0(double a, int n) {
    double r = std::sqrt(1.0 - a);
    return (2.0 - 2.0 * r + a * (n - 1)) * (n - 1) / (a * double(n) * n);
}

double qn_b1(double a, int n) {
    double r = std::sqrt(1.0 - a);
    return (1.0 + r * (n - 1)) / (double(n) * n);
}

double qn_bk(double a, int n, int k) {
    // 2 sqrt(1-a) a^{k-1} (-1)^{k-1} (n-1) C(1/2,k) / n^2,  k >= 2
    double r = std::sqrt(1.0 - a);
    double binom = 1.0;
    for (int j = 1; j <= k; ++j) binom *= (0.5 - j + 1) / j;
    double sign = (k % 2 == 1) ? 1.0 : -1.0;
    return 2.0 * r * std::pow(a, k - 1) * sign * (n - 1) * binom / (double(n) * n);
}

TruncatedSeries qn_series(double gamma, double a, int n, int order) {
    TruncatedSeries inner = ts_add_const(ts_scale(binomial_series(gamma, a, order), 1.0 / n),
                                         (1.0 - 1.0 / n) * std::pow(1.0 - a, gamma));
    TruncatedSeries s = ts_pow_real(inner, 1.0 / gamma);
    return ts_scale(ts_sub(TruncatedSeries::constant(1.0, order), s), 1.0 / a);
}

} // namespace

TEST_CASE("binomial series hand values") {
    auto s = binomial_series(1.0, 1.0, 2);
    CHECK(s[0] == doctest::Approx(1.0));
    CHECK(s[1] == doctest::Approx(-1.0));
    CHECK(s[2] == doctest::Approx(0.0));

    auto h = binomial_series(0.5, 1.0, 2);
    CHECK(h[0] == doctest::Approx(1.0));
    CHECK(h[1] == doctest::Approx(-0.5));
    CHECK(h[2] == doctest::Approx(-0.125));

    auto q = binomial_series(0.5, 0.75, 2);
    CHECK(q[0] == doctest::Approx(1.0));
    CHECK(q[1] == doctest::Approx(-0.375));
    CHECK(q[2] == doctest::Approx(-0.0703125));
}

TEST_CASE("binomial series rejects bad inputs") {
    CHECK_THROWS_AS(binomial_series(std::nan(""), 0.5, 4), std::invalid_argument);
    CHECK_THROWS_AS(binomial_series(0.5, 1.5, 4), std::invalid_argument);
    CHECK_THROWS_AS(binomial_series(0.5, -0.1, 4), std::invalid_argument);
}

TEST_CASE("integer gamma yields a polynomial") {
    for (int m : {1, 2, 3, 5}) {
        auto s = binomial_series(double(m), 0.7, 32);
        int nonzero = 0;
        for (int k = 0; k <= 32; ++k)
            if (s[k] != 0.0) ++nonzero;
        CHECK(nonzero == m + 1);
    }
}

TEST_CASE("product basics") {
    TruncatedSeries a(std::vector<double>{1, 1, 0});
    auto sq = ts_mul(a, a);
    CHECK(sq[0] == 1.0);
    CHECK(sq[1] == 2.0);
    CHECK(sq[2] == 1.0);

    TruncatedSeries one = TruncatedSeries::constant(1.0, 2);
    TruncatedSeries s(std::vector<double>{0.3, -0.2, 0.9});
    auto id = ts_mul(one, s);
    for (int k = 0; k <= 2; ++k) CHECK(id[k] == s[k]);

    CHECK_THROWS_AS(ts_mul(one, TruncatedSeries::constant(1.0, 5)), std::invalid_argument);
}

TEST_CASE("sqrt(1-z) squared recovers 1-z") {
    auto h = binomial_series(0.5, 1.0, 40);
    auto sq = ts_mul(h, h);
    CHECK(std::abs(sq[0] - 1.0) <= 1e-14);
    CHECK(std::abs(sq[1] + 1.0) <= 1e-14);
    for (int k = 2; k <= 40; ++k) CHECK(std::abs(sq[k]) <= 1e-14);
}

TEST_CASE("composition basics") {
    TruncatedSeries p(std::vector<double>{0.2, 0.5, 0.1, 0.07, 0.13});
    auto same = ts_compose(p, TruncatedSeries::identity(4));
    for (int k = 0; k <= 4; ++k) CHECK(same[k] == doctest::Approx(p[k]).epsilon(1e-15));

    // z^2 composed with z + z^2 gives z^2 + 2 z^3 + z^4.
    TruncatedSeries outer(std::vector<double>{0, 0, 1, 0, 0});
    TruncatedSeries inner(std::vector<double>{0, 1, 1, 0, 0});
    auto c = ts_compose(outer, inner);
    CHECK(c[0] == doctest::Approx(0.0));
    CHECK(c[1] == doctest::Approx(0.0));
    CHECK(c[2] == doctest::Approx(1.0));
    CHECK(c[3] == doctest::Approx(2.0));
    CHECK(c[4] == doctest::Approx(1.0));

    CHECK_THROWS_AS(ts_compose(p, TruncatedSeries::constant(0.5, 4)), std::invalid_argument);
}

TEST_CASE("sibuya pursuit normalizer composes to the squared p.g.f.") {
    const int K = 48;
    // P(z) = 1 - (1-z)^{1/2}; Q_2 = 1 - (1 - (1-(1-z)^{1/2})^2)^2; P(Q_2) = P^2.
    TruncatedSeries p = ts_sub(TruncatedSeries::constant(1.0, K), binomial_series(0.5, 1.0, K));
    TruncatedSeries w2 = ts_mul(p, p);
    TruncatedSeries q2 = ts_sub(TruncatedSeries::constant(1.0, K),
                                ts_pow_real(ts_sub(TruncatedSeries::constant(1.0, K), w2), 2.0));
    TruncatedSeries composed = ts_compose(p, q2);
    TruncatedSeries oracle = ts_mul(p, p);
    for (int k = 0; k <= K; ++k) CHECK(std::abs(composed[k] - oracle[k]) <= 1e-12);
}

TEST_CASE("real powers") {
    TruncatedSeries x(std::vector<double>{1, -1, 0, 0});
    auto sq = ts_pow_real(x, 2.0);
    CHECK(sq[0] == doctest::Approx(1.0));
    CHECK(sq[1] == doctest::Approx(-2.0));
    CHECK(sq[2] == doctest::Approx(1.0));
    CHECK(std::abs(sq[3]) <= 1e-14);

    auto back = ts_pow_real(binomial_series(0.5, 1.0, 32), 2.0);
    CHECK(std::abs(back[0] - 1.0) <= 1e-12);
    CHECK(std::abs(back[1] + 1.0) <= 1e-12);
    for (int k = 2; k <= 32; ++k) CHECK(std::abs(back[k]) <= 1e-12);

    auto c = ts_pow_real(TruncatedSeries::constant(4.0, 5), 0.5);
    CHECK(c[0] == doctest::Approx(2.0));
    for (int k = 1; k <= 5; ++k) CHECK(c[k] == 0.0);

    CHECK_THROWS_AS(ts_pow_real(TruncatedSeries::constant(-1.0, 3), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ts_pow_real(TruncatedSeries(3), 0.5), std::invalid_argument);
}

TEST_CASE("product is commutative and associative on random series") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int K = 64;
    for (int rep = 0; rep < 25; ++rep) {
        std::vector<double> xa(K + 1), xb(K + 1), xc(K + 1);
        for (auto& v : xa) v = u(rng);
        for (auto& v : xb) v = u(rng);
        for (auto& v : xc) v = u(rng);
        TruncatedSeries a{xa}, b{xb}, c{xc};
        auto ab = ts_mul(a, b), ba = ts_mul(b, a);
        for (int k = 0; k <= K; ++k) CHECK(std::abs(ab[k] - ba[k]) <= 1e-12);
        auto left = ts_mul(ts_mul(a, b), c), right = ts_mul(a, ts_mul(b, c));
        for (int k = 0; k <= K; ++k) CHECK(std::abs(left[k] - right[k]) <= 1e-12);
    }
}

TEST_CASE("pow then inverse pow round-trips") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::uniform_real_distribution<double> c0(0.5, 2.0);
    const int K = 32;
    for (double p : {2.0, 3.0, 0.5}) {
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<double> xs(K + 1);
            xs[0] = c0(rng);
            for (int k = 1; k <= K; ++k) xs[size_t(k)] = u(rng) / (k * k);
            TruncatedSeries x{xs};
            auto rt = ts_pow_real(ts_pow_real(x, p), 1.0 / p);
            for (int k = 0; k <= K; ++k) CHECK(std::abs(rt[k] - x[k]) <= 1e-10);
        }
    }
}

TEST_CASE("division strips valuation exactly") {
    // (z^2 + z^3) / z = z + z^2
    TruncatedSeries num(std::vector<double>{0, 0, 1, 1, 0});
    auto q = ts_div(num, TruncatedSeries::identity(4));
    CHECK(q[0] == doctest::Approx(0.0));
    CHECK(q[1] == doctest::Approx(1.0));
    CHECK(q[2] == doctest::Approx(1.0));
    CHECK_THROWS_AS(ts_div(TruncatedSeries::constant(1.0, 4), TruncatedSeries::identity(4)),
                    std::invalid_argument);
}

TEST_CASE("candidate normalizer coefficients match their closed forms") {
    const int K = 40;
    for (int ai = 1; ai <= 9; ++ai) {
        double a = ai / 10.0;
        for (int n = 2; n <= 16; ++n) {
            TruncatedSeries q = qn_series(0.5, a, n, K);
            CHECK(std::abs(q[0] - qn_b0(a, n)) <= 1e-12);
            CHECK(std::abs(q[1] - qn_b1(a, n)) <= 1e-12);
            for (int k = 2; k <= K; ++k) CHECK(std::abs(q[k] - qn_bk(a, n, k)) <= 1e-12);
        }
    }
}

TEST_CASE("candidate normalizer coefficients stay nonnegative for proven shapes") {
    for (double gamma : {0.5, 1.0 / 3.0}) {
        for (int ai = 1; ai <= 9; ++ai) {
            for (int n = 2; n <= 16; ++n) {
                TruncatedSeries q = qn_series(gamma, ai / 10.0, n, 64);
                CHECK(first_negative_index(q) == -1);
            }
        }
    }
}

TEST_CASE("specific candidate values at gamma=1/2, a=3/4, n=2") {
    TruncatedSeries q = qn_series(0.5, 0.75, 2, 8);
    CHECK(q[0] == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
    CHECK(q[2] == doctest::Approx(3.0 / 128.0).epsilon(1e-12));
}
