#pragma once

#include <vector>

namespace cstab {

inline constexpr int kDefaultSeriesOrder = 64;

// Formal power series with real (binary64) coefficients, truncated at a fixed
// order K. coeffs()[k] is the coefficient of z^k for 0 <= k <= K. Arithmetic
// between two series requires equal orders and yields that order; terms above
// K are dropped. A series is immutable once built, so values can be shared
// freely across threads.
class TruncatedSeries {
public:
    explicit TruncatedSeries(int order);            // all-zero series
    explicit TruncatedSeries(std::vector<double> coeffs);

    static TruncatedSeries constant(double value, int order);
    static TruncatedSeries identity(int order);     // the series z

    int order() const { return static_cast<int>(c_.size()) - 1; }

    // Coefficient of z^k; indices above the order read as zero.
    double operator[](int k) const;

    const std::vector<double>& coeffs() const { return c_; }

    // Horner evaluation of the truncated polynomial at z.
    double eval(double z) const;

    double max_abs_coeff() const;

private:
    friend TruncatedSeries ts_with_coeff(TruncatedSeries s, int k, double v);
    std::vector<double> c_;
};

// Replace one coefficient (helper for builders; returns a new series).
TruncatedSeries ts_with_coeff(TruncatedSeries s, int k, double v);

// Taylor coefficients of (1 - a z)^gamma about z = 0, to the given order:
// c_k = C(gamma, k) (-a)^k with the generalized binomial coefficient computed
// by the recurrence C(gamma, k) = C(gamma, k-1) (gamma - k + 1) / k.
// Requires finite gamma and a in [0, 1].
TruncatedSeries binomial_series(double gamma, double a, int order);

TruncatedSeries ts_add(const TruncatedSeries& x, const TruncatedSeries& y);
TruncatedSeries ts_sub(const TruncatedSeries& x, const TruncatedSeries& y);
TruncatedSeries ts_scale(const TruncatedSeries& x, double factor);
TruncatedSeries ts_add_const(const TruncatedSeries& x, double value);

// Cauchy product truncated at the common order. Throws on order mismatch.
TruncatedSeries ts_mul(const TruncatedSeries& x, const TruncatedSeries& y);

// Integer power by repeated multiplication, m >= 0.
TruncatedSeries ts_pow_int(const TruncatedSeries& x, int m);

// Taylor coefficients of outer(inner(z)). The pure series-to-series path
// requires inner constant term zero; other cases need a closed-form
// re-expansion of the outer function (see pgf_apply_series in transforms).
TruncatedSeries ts_compose(const TruncatedSeries& outer, const TruncatedSeries& inner);

// log / exp of a series; ts_log requires positive constant term.
TruncatedSeries ts_log(const TruncatedSeries& x);
TruncatedSeries ts_exp(const TruncatedSeries& x);

// x(z)^r via exp(r log x(z)); requires x[0] > 0.
TruncatedSeries ts_pow_real(const TruncatedSeries& x, double r);

// Multiply by z^m (shift coefficients up, dropping the tail).
TruncatedSeries ts_shift_up(const TruncatedSeries& x, int m);

// Exact division where den's lowest nonzero coefficient divides num exactly in
// the valuation sense: num must vanish below den's leading index.
TruncatedSeries ts_div(const TruncatedSeries& num, const TruncatedSeries& den);

// Index of the first coefficient considered genuinely negative, i.e. below
// -1e-12 * max(1, largest |coefficient|); -1 when none. Used by p.g.f.
// nonnegativity verdicts so rounding noise near zero does not flag a series.
int first_negative_index(const TruncatedSeries& s);

} // namespace cstab
