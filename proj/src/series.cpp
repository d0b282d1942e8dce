#include "cstab/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cstab {

namespace {

void require_same_order(const TruncatedSeries& x, const TruncatedSeries& y, const char* op) {
    if (x.order() != y.order())
        throw std::invalid_argument(std::string(op) + ": order mismatch (" +
                                    std::to_string(x.order()) + " vs " +
                                    std::to_string(y.order()) + ")");
}

} // namespace

TruncatedSeries::TruncatedSeries(int order) {
    if (order < 0) throw std::invalid_argument("TruncatedSeries: negative order");
    c_.assign(static_cast<size_t>(order) + 1, 0.0);
}

TruncatedSeries::TruncatedSeries(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("TruncatedSeries: empty coefficient list");
}

TruncatedSeries TruncatedSeries::constant(double value, int order) {
    TruncatedSeries s(order);
    s.c_[0] = value;
    return s;
}

TruncatedSeries TruncatedSeries::identity(int order) {
    TruncatedSeries s(order);
    if (order < 1) throw std::invalid_argument("TruncatedSeries::identity: order must be >= 1");
    s.c_[1] = 1.0;
    return s;
}

double TruncatedSeries::operator[](int k) const {
    if (k < 0) throw std::out_of_range("TruncatedSeries: negative index");
    if (k > order()) return 0.0;
    return c_[static_cast<size_t>(k)];
}

double TruncatedSeries::eval(double z) const {
    double r = 0.0;
    for (int k = order(); k >= 0; --k) r = r * z + c_[static_cast<size_t>(k)];
    return r;
}

double TruncatedSeries::max_abs_coeff() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

TruncatedSeries ts_with_coeff(TruncatedSeries s, int k, double v) {
    if (k < 0 || k > s.order()) throw std::out_of_range("ts_with_coeff: index out of range");
    s.c_[static_cast<size_t>(k)] = v;
    return s;
}

TruncatedSeries binomial_series(double gamma, double a, int order) {
    if (!std::isfinite(gamma)) throw std::invalid_argument("binomial_series: non-finite gamma");
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("binomial_series: a outside [0,1]");
    if (order < 0) throw std::invalid_argument("binomial_series: negative order");
    std::vector<double> c(static_cast<size_t>(order) + 1, 0.0);
    double term = 1.0; // C(gamma, k) (-a)^k
    c[0] = term;
    for (int k = 1; k <= order; ++k) {
        term *= (gamma - k + 1) / static_cast<double>(k) * (-a);
        c[static_cast<size_t>(k)] = term;
    }
    return TruncatedSeries(std::move(c));
}

TruncatedSeries ts_add(const TruncatedSeries& x, const TruncatedSeries& y) {
    require_same_order(x, y, "ts_add");
    std::vector<double> c(x.coeffs());
    for (int k = 0; k <= y.order(); ++k) c[static_cast<size_t>(k)] += y[k];
    return TruncatedSeries(std::move(c));
}

TruncatedSeries ts_sub(const TruncatedSeries& x, const TruncatedSeries& y) {
    require_same_order(x, y, "ts_sub");
    std::vector<double> c(x.coeffs());
    for (int k = 0; k <= y.order(); ++k) c[static_cast<size_t>(k)] -= y[k];
    return TruncatedSeries(std::move(c));
}

TruncatedSeries ts_scale(const TruncatedSeries& x, double factor) {
    std::vector<double> c(x.coeffs());
    for (double& v : c) v *= factor;
    return TruncatedSeries(std::move(c));
}

TruncatedSeries ts_add_const(const TruncatedSeries& x, double value) {
    std::vector<double> c(x.coeffs());
    c[0] += value;
    return TruncatedSeries(std::move(c));
}

TruncatedSeries ts_mul(const TruncatedSeries& x, const TruncatedSeries& y) {
    require_same_order(x, y, "ts_mul");
    const int K = x.order();
    std::vector<double> c(static_cast<size_t>(K) + 1, 0.0);
    for (int i = 0; i <= K; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (int j = 0; j + i <= K; ++j) c[static_cast<size_t>(i + j)] += xi * y[j];
    }
    return TruncatedSeries(std::move(c));
}

TruncatedSeries ts_pow_int(const TruncatedSeries& x, int m) {
    if (m < 0) throw std::invalid_argument("ts_pow_int: negative exponent");
    TruncatedSeries r = TruncatedSeries::constant(1.0, x.order());
    TruncatedSeries base = x;
    while (m > 0) {
        if (m & 1) r = ts_mul(r, base);
        m >>= 1;
        if (m > 0) base = ts_mul(base, base);
    }
    return r;
}

TruncatedSeries ts_compose(const TruncatedSeries& outer, const TruncatedSeries& inner) {
    require_same_order(outer, inner, "ts_compose");
    if (std::abs(inner[0]) > 0.0)
        throw std::invalid_argument("ts_compose: inner constant term must be zero "
                                    "(re-expansion of the outer function is not available here)");
    const int K = outer.order();
    // Horner in the series ring: r = outer[K]; r = r*inner + outer[k].
    TruncatedSeries r = TruncatedSeries::constant(outer[K], K);
    for (int k = K - 1; k >= 0; --k) r = ts_add_const(ts_mul(r, inner), outer[k]);
    return r;
}

TruncatedSeries ts_log(const TruncatedSeries& x) {
    if (!(x[0] > 0.0)) throw std::invalid_argument("ts_log: constant term must be positive");
    const int K = x.order();
    std::vector<double> l(static_cast<size_t>(K) + 1, 0.0);
    l[0] = std::log(x[0]);
    for (int k = 1; k <= K; ++k) {
        double s = static_cast<double>(k) * x[k];
        for (int j = 1; j < k; ++j) s -= static_cast<double>(j) * l[static_cast<size_t>(j)] * x[k - j];
        l[static_cast<size_t>(k)] = s / (x[0] * k);
    }
    return TruncatedSeries(std::move(l));
}

TruncatedSeries ts_exp(const TruncatedSeries& x) {
    const int K = x.order();
    std::vector<double> e(static_cast<size_t>(K) + 1, 0.0);
    e[0] = std::exp(x[0]);
    for (int k = 1; k <= K; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += static_cast<double>(j) * x[j] * e[static_cast<size_t>(k - j)];
        e[static_cast<size_t>(k)] = s / k;
    }
    return TruncatedSeries(std::move(e));
}

TruncatedSeries ts_pow_real(const TruncatedSeries& x, double r) {
    if (!(x[0] > 0.0)) throw std::invalid_argument("ts_pow_real: constant term must be positive");
    return ts_exp(ts_scale(ts_log(x), r));
}

TruncatedSeries ts_shift_up(const TruncatedSeries& x, int m) {
    if (m < 0) throw std::invalid_argument("ts_shift_up: negative shift");
    const int K = x.order();
    std::vector<double> c(static_cast<size_t>(K) + 1, 0.0);
    for (int k = 0; k + m <= K; ++k) c[static_cast<size_t>(k + m)] = x[k];
    return TruncatedSeries(std::move(c));
}

TruncatedSeries ts_div(const TruncatedSeries& num, const TruncatedSeries& den) {
    require_same_order(num, den, "ts_div");
    const int K = num.order();
    int lead = 0;
    while (lead <= K && den[lead] == 0.0) ++lead;
    if (lead > K) throw std::invalid_argument("ts_div: zero divisor");
    for (int k = 0; k < lead; ++k)
        if (num[k] != 0.0)
            throw std::invalid_argument("ts_div: numerator valuation below divisor valuation");
    // Strip the common z^lead factor, then do the standard division recurrence.
    std::vector<double> q(static_cast<size_t>(K) + 1, 0.0);
    for (int k = 0; k + lead <= K; ++k) {
        double s = num[k + lead];
        for (int j = 0; j < k; ++j) s -= q[static_cast<size_t>(j)] * den[k - j + lead];
        q[static_cast<size_t>(k)] = s / den[lead];
    }
    return TruncatedSeries(std::move(q));
}

int first_negative_index(const TruncatedSeries& s) {
    const double tol = 1e-12 * std::max(1.0, s.max_abs_coeff());
    for (int k = 0; k <= s.order(); ++k)
        if (s[k] < -tol) return k;
    return -1;
}

} // namespace cstab
