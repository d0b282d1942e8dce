#include "cstab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cstab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double get(const ParamMap& p, const std::string& name) {
    auto it = p.find(name);
    if (it == p.end()) throw std::invalid_argument("missing parameter '" + name + "'");
    if (!std::isfinite(it->second)) throw std::invalid_argument("non-finite parameter '" + name + "'");
    return it->second;
}

double get_or(const ParamMap& p, const std::string& name, double fallback) {
    auto it = p.find(name);
    return it == p.end() ? fallback : it->second;
}

int get_index(const ParamMap& p, const std::string& name) {
    double v = get(p, name);
    double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || r < 1)
        throw std::invalid_argument("parameter '" + name + "' must be a positive integer");
    return static_cast<int>(r);
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Standard normal c.d.f.
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double chebyshev_T(int n, double x) {
    if (n == 0) return 1.0;
    double prev = 1.0, cur = x;
    for (int k = 2; k <= n; ++k) {
        double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

// Coefficients of the Chebyshev polynomial T_n (exact small integers).
std::vector<double> chebyshev_coeffs(int n) {
    std::vector<double> prev{1.0}, cur{0.0, 1.0};
    if (n == 0) return prev;
    for (int k = 2; k <= n; ++k) {
        std::vector<double> next(static_cast<size_t>(k) + 1, 0.0);
        for (size_t j = 0; j < cur.size(); ++j) next[j + 1] += 2.0 * cur[j];
        for (size_t j = 0; j < prev.size(); ++j) next[j] -= prev[j];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

} // namespace

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Chf: return "CHF";
        case Kind::Laplace: return "LAPLACE";
        case Kind::Mellin: return "MELLIN";
        case Kind::Pgf: return "PGF";
        case Kind::Survival: return "SURVIVAL";
    }
    return "?";
}

Domain all_reals() {
    return Domain{-std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity()};
}

Domain nonnegative_reals() {
    return Domain{0.0, std::numeric_limits<double>::infinity()};
}

Transform::Transform(Kind kind, std::string family, ParamMap params, Domain domain, Eval eval)
    : kind_(kind), family_(std::move(family)), params_(std::move(params)),
      domain_(domain), eval_(std::move(eval)) {}

Complex Transform::operator()(double point) const {
    if (!domain_.contains(point))
        throw std::domain_error(family_ + ": point " + std::to_string(point) +
                                " outside the " + std::string(kind_name(kind_)) + " domain");
    return eval_(point);
}

double Transform::real_at(double point) const {
    Complex v = (*this)(point);
    if (std::abs(v.imag()) > 1e-14 * std::max(1.0, std::abs(v)))
        throw std::domain_error(family_ + ": value has a non-negligible imaginary part");
    return v.real();
}

Complex Transform::log_at(double point) const {
    if (!domain_.contains(point))
        throw std::domain_error(family_ + ": point outside domain in log_at");
    if (log_eval_) return log_eval_(point);
    return std::log(eval_(point));
}

double Transform::param(const std::string& name) const { return get(params_, name); }

Transform& Transform::with_log(Eval log_eval) {
    log_eval_ = std::move(log_eval);
    return *this;
}

Transform& Transform::with_inverse(RealFn inverse) {
    inverse_ = std::move(inverse);
    return *this;
}

double Transform::inverse(double y) const {
    if (!inverse_) throw std::logic_error(family_ + ": no closed-form inverse registered");
    return inverse_(y);
}

bool DistributionSpec::has_kind(Kind k) const {
    return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

Transform make_transform(const std::string& family, const ParamMap& params) {
    using C = Complex;

    if (family == "positive_stable_laplace") {
        double alpha = get(params, "alpha");
        require(alpha > 0 && alpha < 1, "positive_stable: alpha must lie in (0,1)");
        Transform t(Kind::Laplace, family, params, nonnegative_reals(),
                    [alpha](double s) { return C(std::exp(-std::pow(s, alpha)), 0); });
        t.with_log([alpha](double s) { return C(-std::pow(s, alpha), 0); });
        t.with_inverse([alpha](double y) { return std::pow(-std::log(y), 1.0 / alpha); });
        return t;
    }
    if (family == "tempered_stable_laplace") {
        double alpha = get(params, "alpha");
        double lambda = get(params, "lambda");
        double h = get(params, "h");
        require(alpha > 0 && alpha < 1, "tempered_stable: alpha must lie in (0,1)");
        double m = 1.0 / alpha;
        require(std::abs(m - std::round(m)) < 1e-9,
                "tempered_stable: alpha must be the reciprocal of an integer");
        require(lambda > 0 && h > 0, "tempered_stable: lambda and h must be positive");
        double c = std::pow(lambda, alpha) * (1.0 + std::tan(kPi * alpha / 2.0));
        auto psi = [alpha, h, c](double s) { return -c * (std::pow(s + h, alpha) - std::pow(h, alpha)); };
        Transform t(Kind::Laplace, family, params, nonnegative_reals(),
                    [psi](double s) { return C(std::exp(psi(s)), 0); });
        t.with_log([psi](double s) { return C(psi(s), 0); });
        t.with_inverse([alpha, h, c](double y) {
            return std::pow(-std::log(y) / c + std::pow(h, alpha), 1.0 / alpha) - h;
        });
        return t;
    }
    if (family == "laplace_chf") {
        double a = get(params, "a");
        require(a > 0, "laplace: a must be positive");
        return Transform(Kind::Chf, family, params, all_reals(),
                         [a](double t) { return C(1.0 / (1.0 + a * a * t * t), 0); });
    }
    if (family == "gamma_laplace") {
        double b = get(params, "b");
        double gamma = get(params, "gamma");
        require(b > 0 && gamma > 0, "gamma: b and gamma must be positive");
        Transform t(Kind::Laplace, family, params, nonnegative_reals(),
                    [b, gamma](double s) { return C(std::pow(1.0 + b * s, -gamma), 0); });
        t.with_log([b, gamma](double s) { return C(-gamma * std::log1p(b * s), 0); });
        t.with_inverse([b, gamma](double y) { return (std::pow(y, -1.0 / gamma) - 1.0) / b; });
        return t;
    }
    if (family == "geometric_pgf") {
        double p = get(params, "p");
        require(p > 0 && p < 1, "geometric: p must lie in (0,1)");
        Transform t(Kind::Pgf, family, params, Domain{0.0, 1.0},
                    [p](double z) { return C((1.0 - p) / (1.0 - p * z), 0); });
        t.with_inverse([p](double y) { return (1.0 - (1.0 - p) / y) / p; });
        return t;
    }
    if (family == "tempered_discrete_pgf") {
        double lambda = get(params, "lambda");
        double a = get(params, "a");
        double gamma = get(params, "gamma");
        require(lambda > 0, "tempered_discrete: lambda must be positive");
        require(a > 0 && a <= 1, "tempered_discrete: a must lie in (0,1]");
        require(gamma > 0 && gamma <= 1, "tempered_discrete: gamma must lie in (0,1]");
        double base = std::pow(1.0 - a, gamma); // (1-a)^gamma, 0 at a=1
        Transform t(Kind::Pgf, family, params, Domain{0.0, 1.0},
                    [lambda, a, gamma, base](double z) {
                        return C(std::exp(-lambda * (std::pow(1.0 - a * z, gamma) - base)), 0);
                    });
        t.with_inverse([lambda, a, gamma, base](double y) {
            return (1.0 - std::pow(base - std::log(y) / lambda, 1.0 / gamma)) / a;
        });
        return t;
    }
    if (family == "sibuya_pgf") {
        double gamma = get(params, "gamma");
        require(gamma > 0 && gamma < 1, "sibuya: gamma must lie in (0,1)");
        Transform t(Kind::Pgf, family, params, Domain{0.0, 1.0},
                    [gamma](double z) { return C(1.0 - std::pow(1.0 - z, gamma), 0); });
        t.with_inverse([gamma](double y) { return 1.0 - std::pow(1.0 - y, 1.0 / gamma); });
        return t;
    }
    if (family == "srw_passage_pgf") {
        int m = get_index(params, "m");
        // (1 - sqrt(1-z^2))/z rewritten as z/(1 + sqrt(1-z^2)), stable at z = 0.
        return Transform(Kind::Pgf, family, params, Domain{0.0, 1.0}, [m](double z) {
            double base = z / (1.0 + std::sqrt(std::max(0.0, 1.0 - z * z)));
            return C(std::pow(base, m), 0);
        });
    }
    if (family == "lognormal_mellin") {
        double b = get(params, "b");
        require(b > 0, "lognormal: b must be positive");
        Transform t(Kind::Mellin, family, params, all_reals(),
                    [b](double u) { return C(std::exp(b * b * u * u / 2.0), 0); });
        t.with_log([b](double u) { return C(b * b * u * u / 2.0, 0); });
        return t;
    }
    if (family == "double_pareto_unnormalized_mellin") {
        double a = get(params, "a");
        require(a > 1, "double_pareto: a must exceed 1");
        return Transform(Kind::Mellin, family, params, Domain{-a, a, true, true},
                         [a](double u) { return C((a * a - 1.0) / (a * a - u * u), 0); });
    }
    if (family == "double_pareto_mellin") {
        double a = get(params, "a");
        require(a > 1, "double_pareto: a must exceed 1");
        return Transform(Kind::Mellin, family, params, Domain{-a, a, true, true},
                         [a](double u) { return C(a * a / (a * a - u * u), 0); });
    }
    if (family == "log_levy_mellin") {
        // E[X^u] = exp(-sqrt(2) sqrt(-u)), convergent for u <= 0: on the log
        // scale this is the Laplace transform exp(-sqrt(2 s)) of ln X at s = -u.
        Transform t(Kind::Mellin, family, params,
                    Domain{-std::numeric_limits<double>::infinity(), 0.0},
                    [](double u) { return C(std::exp(-std::sqrt(-2.0 * u)), 0); });
        t.with_log([](double u) { return C(-std::sqrt(-2.0 * u), 0); });
        return t;
    }
    if (family == "pareto_mellin") {
        double alpha = get(params, "alpha");
        require(alpha > 0, "pareto: alpha must be positive");
        return Transform(Kind::Mellin, family, params,
                         Domain{-std::numeric_limits<double>::infinity(), alpha, false, true},
                         [alpha](double u) { return C(alpha / (alpha - u), 0); });
    }
    if (family == "weibull_survival") {
        double alpha = get(params, "alpha");
        double beta = get(params, "beta");
        require(alpha > 0 && beta > 0, "weibull: alpha and beta must be positive");
        Transform t(Kind::Survival, family, params, nonnegative_reals(),
                    [alpha, beta](double x) { return C(std::exp(-std::pow(x / beta, alpha)), 0); });
        t.with_log([alpha, beta](double x) { return C(-std::pow(x / beta, alpha), 0); });
        t.with_inverse([alpha, beta](double y) { return beta * std::pow(-std::log(y), 1.0 / alpha); });
        return t;
    }
    if (family == "gompertz_makeham_survival") {
        double xi = get(params, "xi");
        double lambda = get(params, "lambda");
        require(xi > 0 && lambda > 0, "gompertz_makeham: xi and lambda must be positive");
        Transform t(Kind::Survival, family, params, nonnegative_reals(),
                    [xi, lambda](double x) { return C(std::exp(xi * (1.0 - std::exp(lambda * x))), 0); });
        t.with_log([xi, lambda](double x) { return C(xi * (1.0 - std::exp(lambda * x)), 0); });
        t.with_inverse([xi, lambda](double y) { return std::log1p(-std::log(y) / xi) / lambda; });
        return t;
    }
    if (family == "pareto_survival") {
        double alpha = get(params, "alpha");
        require(alpha > 0, "pareto: alpha must be positive");
        // Support is [1, inf); below 1 the power form x^{-alpha} is kept as the
        // algebraic extension so the normalizer equation stays solvable there.
        Transform t(Kind::Survival, family, params,
                    Domain{0.0, std::numeric_limits<double>::infinity(), true, false},
                    [alpha](double x) { return C(std::pow(x, -alpha), 0); });
        t.with_log([alpha](double x) { return C(-alpha * std::log(x), 0); });
        t.with_inverse([alpha](double y) { return std::pow(y, -1.0 / alpha); });
        return t;
    }

    // ---- normalizer families ------------------------------------------------

    if (family == "unit_laplace") {
        Transform t(Kind::Laplace, family, params, nonnegative_reals(),
                    [](double s) { return C(std::exp(-s), 0); });
        t.with_log([](double s) { return C(-s, 0); });
        t.with_inverse([](double y) { return -std::log(y); });
        return t;
    }
    if (family == "unit_chf") {
        Transform t(Kind::Chf, family, params, all_reals(),
                    [](double t_) { return std::exp(C(0, t_)); });
        t.with_log([](double t_) { return C(0, t_); });
        return t;
    }
    if (family == "unit_pgf") {
        Transform t(Kind::Pgf, family, params, Domain{0.0, 1.0},
                    [](double z) { return C(z, 0); });
        t.with_inverse([](double y) { return y; });
        return t;
    }
    if (family == "unit_survival") {
        Transform t(Kind::Survival, family, params, nonnegative_reals(),
                    [](double x) { return C(std::exp(-x), 0); });
        t.with_log([](double x) { return C(-x, 0); });
        t.with_inverse([](double y) { return -std::log(y); });
        return t;
    }
    if (family == "unit_mellin") {
        Transform t(Kind::Mellin, family, params, all_reals(),
                    [](double u) { return C(std::exp(u), 0); });
        t.with_log([](double u) { return C(u, 0); });
        return t;
    }
    if (family == "stable_scale_laplace") {
        double alpha = get(params, "alpha");
        int n = get_index(params, "n");
        require(alpha > 0 && alpha < 1, "stable_scale: alpha must lie in (0,1)");
        double rate = std::pow(static_cast<double>(n), -1.0 / alpha);
        Transform t(Kind::Laplace, family, params, nonnegative_reals(),
                    [rate](double s) { return C(std::exp(-rate * s), 0); });
        t.with_log([rate](double s) { return C(-rate * s, 0); });
        return t;
    }
    if (family == "tempered_stable_g_laplace") {
        double alpha = get(params, "alpha");
        double h = get(params, "h");
        int n = get_index(params, "n");
        require(alpha > 0 && alpha < 1 && h > 0, "tempered_stable_g: bad parameters");
        double w = 1.0 / static_cast<double>(n);
        auto psi = [alpha, h, w](double s) {
            return h - std::pow(w * std::pow(s + h, alpha) + (1.0 - w) * std::pow(h, alpha),
                                1.0 / alpha);
        };
        Transform t(Kind::Laplace, family, params, nonnegative_reals(),
                    [psi](double s) { return C(std::exp(psi(s)), 0); });
        t.with_log([psi](double s) { return C(psi(s), 0); });
        return t;
    }
    if (family == "laplace_g_chf") {
        double a = get(params, "a");
        int n = get_index(params, "n");
        require(a > 0, "laplace_g: a must be positive");
        auto psi = [a, n](double t_) {
            return (1.0 - std::pow(1.0 + a * a * t_ * t_, 1.0 / n)) / a;
        };
        Transform t(Kind::Chf, family, params, all_reals(),
                    [psi](double t_) { return C(std::exp(psi(t_)), 0); });
        t.with_log([psi](double t_) { return C(psi(t_), 0); });
        return t;
    }
    if (family == "gamma_g_laplace") {
        double b = get(params, "b");
        int n = get_index(params, "n");
        require(b > 0, "gamma_g: b must be positive");
        auto psi = [b, n](double s) { return (1.0 - std::pow(1.0 + b * s, 1.0 / n)) / b; };
        Transform t(Kind::Laplace, family, params, nonnegative_reals(),
                    [psi](double s) { return C(std::exp(psi(s)), 0); });
        t.with_log([psi](double s) { return C(psi(s), 0); });
        return t;
    }
    if (family == "geometric_q_pgf") {
        double p = get(params, "p");
        int n = get_index(params, "n");
        require(p > 0 && p < 1, "geometric_q: p must lie in (0,1)");
        double tilt = std::pow(1.0 - p, 1.0 - 1.0 / n);
        Transform t(Kind::Pgf, family, params, Domain{0.0, 1.0},
                    [p, n, tilt](double z) {
                        return C((1.0 - tilt * std::pow(1.0 - p * z, 1.0 / n)) / p, 0);
                    });
        return t;
    }
    if (family == "tempered_discrete_q_pgf") {
        double a = get(params, "a");
        double gamma = get(params, "gamma");
        int n = get_index(params, "n");
        require(a > 0 && a <= 1, "tempered_discrete_q: a must lie in (0,1]");
        require(gamma > 0 && gamma <= 1, "tempered_discrete_q: gamma must lie in (0,1]");
        double w = 1.0 / static_cast<double>(n);
        double base = std::pow(1.0 - a, gamma);
        return Transform(Kind::Pgf, family, params, Domain{0.0, 1.0},
                         [a, gamma, w, base](double z) {
                             double inner = (1.0 - w) * base + w * std::pow(1.0 - a * z, gamma);
                             return C((1.0 - std::pow(inner, 1.0 / gamma)) / a, 0);
                         });
    }
    if (family == "sibuya_q_pgf") {
        double gamma = get(params, "gamma");
        int n = get_index(params, "n");
        require(gamma > 0 && gamma < 1, "sibuya_q: gamma must lie in (0,1)");
        return Transform(Kind::Pgf, family, params, Domain{0.0, 1.0},
                         [gamma, n](double z) {
                             double w = 1.0 - std::pow(1.0 - z, gamma);
                             return C(1.0 - std::pow(1.0 - std::pow(w, n), 1.0 / gamma), 0);
                         });
    }
    if (family == "chebyshev_q_pgf") {
        int n = get_index(params, "n");
        return Transform(Kind::Pgf, family, params, Domain{0.0, 1.0}, [n](double z) {
            if (z == 0.0) return C(0, 0);
            return C(1.0 / chebyshev_T(n, 1.0 / z), 0);
        });
    }
    if (family == "power_mellin") {
        // Degenerate product normalization X -> X^c: N(u) = e^{c u}.
        double c = get(params, "c");
        Transform t(Kind::Mellin, family, params, all_reals(),
                    [c](double u) { return C(std::exp(c * u), 0); });
        t.with_log([c](double u) { return C(c * u, 0); });
        return t;
    }
    if (family == "double_pareto_unnormalized_n_mellin") {
        double a = get(params, "a");
        int n = get_index(params, "n");
        require(a > 1, "double_pareto_unnormalized_n: a must exceed 1");
        double scale = std::pow(a * a - 1.0, 1.0 - 1.0 / n) / a;
        auto psi = [a, n, scale](double u) {
            return a - scale * std::pow(a * a - u * u, 1.0 / n);
        };
        Transform t(Kind::Mellin, family, params, Domain{-a, a, true, true},
                    [psi](double u) { return C(std::exp(psi(u)), 0); });
        t.with_log([psi](double u) { return C(psi(u), 0); });
        return t;
    }
    if (family == "double_pareto_matched_n_mellin") {
        double a = get(params, "a");
        int n = get_index(params, "n");
        require(a > 1, "double_pareto_matched_n: a must exceed 1");
        auto psi = [a, n](double u) {
            return a * (1.0 - std::pow(1.0 - u * u / (a * a), 1.0 / n));
        };
        Transform t(Kind::Mellin, family, params, Domain{-a, a, true, true},
                    [psi](double u) { return C(std::exp(psi(u)), 0); });
        t.with_log([psi](double u) { return C(psi(u), 0); });
        return t;
    }
    if (family == "pareto_g_chf") {
        double alpha = get(params, "alpha");
        int n = get_index(params, "n");
        require(alpha > 0, "pareto_g: alpha must be positive");
        auto psi = [alpha, n](double t_) {
            return alpha * (std::pow(C(1.0, t_ / alpha), n) - 1.0);
        };
        Transform t(Kind::Chf, family, params, all_reals(),
                    [psi](double t_) { return std::exp(psi(t_)); });
        t.with_log(psi);
        return t;
    }
    if (family == "min_exp_survival") {
        double rate = get(params, "rate");
        require(rate > 0, "min_exp: rate must be positive");
        Transform t(Kind::Survival, family, params, nonnegative_reals(),
                    [rate](double x) { return C(std::exp(-rate * x), 0); });
        t.with_log([rate](double x) { return C(-rate * x, 0); });
        t.with_inverse([rate](double y) { return -std::log(y) / rate; });
        return t;
    }
    if (family == "power_min_survival") {
        // Gbar(x) = exp(-x^q); q = 1/n in the min-c.s. family, q = n in the
        // pursuit family.
        double q = get(params, "q");
        require(q > 0, "power_min: q must be positive");
        Transform t(Kind::Survival, family, params, nonnegative_reals(),
                    [q](double x) { return C(std::exp(-std::pow(x, q)), 0); });
        t.with_log([q](double x) { return C(-std::pow(x, q), 0); });
        t.with_inverse([q](double y) { return std::pow(-std::log(y), 1.0 / q); });
        return t;
    }
    if (family == "gm_gbar_survival") {
        double lambda = get(params, "lambda");
        int n = get_index(params, "n");
        require(lambda > 0, "gm_gbar: lambda must be positive");
        Transform t(Kind::Survival, family, params, nonnegative_reals(),
                    [lambda, n](double x) {
                        return C(std::pow(1.0 + n * std::expm1(lambda * x), -1.0 / lambda), 0);
                    });
        t.with_log([lambda, n](double x) {
            return C(-std::log1p(n * std::expm1(lambda * x)) / lambda, 0);
        });
        t.with_inverse([lambda, n](double y) {
            return std::log1p((std::pow(y, -lambda) - 1.0) / n) / lambda;
        });
        return t;
    }

    throw std::invalid_argument("make_transform: unknown family '" + family + "'");
}

DistributionSpec make_distribution(const std::string& family, const ParamMap& params) {
    DistributionSpec d;
    d.family = family;
    d.params = params;
    if (family == "positive_stable") {
        make_transform("positive_stable_laplace", params);
        d.support = "(0,inf)";
        d.kinds = {Kind::Laplace};
        d.has_sampler = true;
    } else if (family == "tempered_stable") {
        make_transform("tempered_stable_laplace", params);
        d.support = "(0,inf)";
        d.kinds = {Kind::Laplace};
    } else if (family == "laplace") {
        make_transform("laplace_chf", params);
        d.support = "(-inf,inf)";
        d.kinds = {Kind::Chf};
        d.has_sampler = true;
    } else if (family == "gamma") {
        make_transform("gamma_laplace", params);
        d.support = "(0,inf)";
        d.kinds = {Kind::Laplace};
        d.has_sampler = true;
    } else if (family == "geometric") {
        make_transform("geometric_pgf", params);
        d.support = "{0,1,2,...}";
        d.kinds = {Kind::Pgf};
        d.has_sampler = true;
    } else if (family == "tempered_discrete") {
        make_transform("tempered_discrete_pgf", params);
        d.support = "{0,1,2,...}";
        d.kinds = {Kind::Pgf};
        d.has_sampler = true;
    } else if (family == "sibuya") {
        make_transform("sibuya_pgf", params);
        d.support = "{1,2,...}";
        d.kinds = {Kind::Pgf};
        d.has_sampler = true;
    } else if (family == "srw_passage") {
        make_transform("srw_passage_pgf", params);
        d.support = "{m,m+2,...}";
        d.kinds = {Kind::Pgf};
    } else if (family == "lognormal") {
        make_transform("lognormal_mellin", params);
        d.support = "(0,inf)";
        d.kinds = {Kind::Mellin};
        d.has_sampler = true;
        d.mellin_strip = Domain{-3.0, 3.0};
    } else if (family == "double_pareto") {
        make_transform("double_pareto_mellin", params);
        double a = get(params, "a");
        d.support = "(0,inf)";
        d.kinds = {Kind::Mellin};
        d.has_sampler = true;
        d.mellin_strip = Domain{-a, a, true, true};
    } else if (family == "double_pareto_unnormalized") {
        // The unnormalized parameterization: algebraically consistent but its
        // Mellin transform has M(0) != 1, so no sampler is registered.
        make_transform("double_pareto_unnormalized_mellin", params);
        double a = get(params, "a");
        d.support = "(0,inf)";
        d.kinds = {Kind::Mellin};
        d.mellin_strip = Domain{-a, a, true, true};
    } else if (family == "log_levy") {
        make_transform("log_levy_mellin", params);
        d.support = "(1,inf)";
        d.kinds = {Kind::Mellin};
        d.mellin_strip = Domain{-10.0, 0.0};
    } else if (family == "pareto") {
        make_transform("pareto_survival", params);
        double alpha = get(params, "alpha");
        d.support = "[1,inf)";
        d.kinds = {Kind::Survival, Kind::Mellin};
        d.has_sampler = true;
        d.mellin_strip = Domain{-5.0, alpha, false, true};
    } else if (family == "weibull") {
        make_transform("weibull_survival", params);
        d.support = "(0,inf)";
        d.kinds = {Kind::Survival};
        d.has_sampler = true;
    } else if (family == "gompertz_makeham") {
        make_transform("gompertz_makeham_survival", params);
        d.support = "(0,inf)";
        d.kinds = {Kind::Survival};
        d.has_sampler = true;
    } else {
        throw std::invalid_argument("make_distribution: unknown family '" + family + "'");
    }
    return d;
}

Transform distribution_transform(const DistributionSpec& dist, Kind kind) {
    if (!dist.has_kind(kind))
        throw std::invalid_argument(dist.family + " has no " + kind_name(kind) + " transform");
    static const std::map<std::pair<std::string, Kind>, std::string> table = {
        {{"positive_stable", Kind::Laplace}, "positive_stable_laplace"},
        {{"tempered_stable", Kind::Laplace}, "tempered_stable_laplace"},
        {{"laplace", Kind::Chf}, "laplace_chf"},
        {{"gamma", Kind::Laplace}, "gamma_laplace"},
        {{"geometric", Kind::Pgf}, "geometric_pgf"},
        {{"tempered_discrete", Kind::Pgf}, "tempered_discrete_pgf"},
        {{"sibuya", Kind::Pgf}, "sibuya_pgf"},
        {{"srw_passage", Kind::Pgf}, "srw_passage_pgf"},
        {{"lognormal", Kind::Mellin}, "lognormal_mellin"},
        {{"double_pareto", Kind::Mellin}, "double_pareto_mellin"},
        {{"double_pareto_unnormalized", Kind::Mellin}, "double_pareto_unnormalized_mellin"},
        {{"log_levy", Kind::Mellin}, "log_levy_mellin"},
        {{"pareto", Kind::Survival}, "pareto_survival"},
        {{"pareto", Kind::Mellin}, "pareto_mellin"},
        {{"weibull", Kind::Survival}, "weibull_survival"},
        {{"gompertz_makeham", Kind::Survival}, "gompertz_makeham_survival"},
    };
    auto it = table.find({dist.family, kind});
    if (it == table.end())
        throw std::invalid_argument(dist.family + ": no transform mapping for kind");
    return make_transform(it->second, dist.params);
}

bool has_chf_components(const DistributionSpec& dist) { return dist.family == "laplace"; }

ChfComponents chf_components(const DistributionSpec& dist) {
    if (dist.family == "laplace") {
        // f(t) = (1/2)/(1 - i a t) + (1/2)/(1 + i a t); as functions of w = it
        // and v = -it both halves read (1/2)/(1 - a w).
        double a = get(dist.params, "a");
        auto half = [a](Complex w) { return 0.5 / (1.0 - a * w); };
        return ChfComponents{half, half};
    }
    throw std::invalid_argument(dist.family + ": no registered ch.f. split");
}

bool has_mellin_components(const DistributionSpec& dist) {
    return dist.family == "lognormal" || dist.family == "double_pareto" ||
           dist.family == "double_pareto_unnormalized" || dist.family == "log_levy" ||
           dist.family == "pareto";
}

MellinComponents mellin_components(const DistributionSpec& dist) {
    auto real_only = [](Complex w, const char* who) {
        if (std::abs(w.imag()) > 1e-12 * std::max(1.0, std::abs(w)))
            throw std::domain_error(std::string(who) + ": complex argument not supported");
        return w.real();
    };
    if (dist.family == "lognormal") {
        double b = get(dist.params, "b");
        auto lower = [b, real_only](Complex w) {
            double u = real_only(w, "lognormal M1");
            return Complex(std::exp(b * b * u * u / 2.0) * normal_cdf(-b * u), 0);
        };
        auto upper = [b, real_only](Complex w) {
            double u = real_only(w, "lognormal M2");
            return Complex(std::exp(b * b * u * u / 2.0) * normal_cdf(b * u), 0);
        };
        return MellinComponents{lower, upper};
    }
    if (dist.family == "double_pareto" || dist.family == "double_pareto_unnormalized") {
        double a = get(dist.params, "a");
        double c = dist.family == "double_pareto" ? a / 2.0 : (a * a - 1.0) / (2.0 * a);
        return MellinComponents{[a, c](Complex w) { return c / (a + w); },
                                [a, c](Complex w) { return c / (a - w); }};
    }
    if (dist.family == "log_levy") {
        return MellinComponents{[](Complex) { return Complex(0, 0); },
                                [](Complex w) { return std::exp(-std::sqrt(-2.0 * w)); }};
    }
    if (dist.family == "pareto") {
        double alpha = get(dist.params, "alpha");
        return MellinComponents{[](Complex) { return Complex(0, 0); },
                                [alpha](Complex w) { return alpha / (alpha - w); }};
    }
    throw std::invalid_argument(dist.family + ": no registered Mellin split");
}

TruncatedSeries pgf_series(const Transform& pgf, int order) {
    if (pgf.kind() != Kind::Pgf) throw std::invalid_argument("pgf_series: transform is not a p.g.f.");
    const std::string& f = pgf.family();
    const ParamMap& p = pgf.params();
    if (f == "unit_pgf") return TruncatedSeries::identity(order);
    if (f == "geometric_pgf") {
        double q = get(p, "p");
        std::vector<double> c(static_cast<size_t>(order) + 1);
        double term = 1.0 - q;
        for (int k = 0; k <= order; ++k, term *= q) c[static_cast<size_t>(k)] = term;
        return TruncatedSeries(std::move(c));
    }
    if (f == "geometric_q_pgf") {
        double q = get(p, "p");
        int n = get_index(p, "n");
        double tilt = std::pow(1.0 - q, 1.0 - 1.0 / n);
        TruncatedSeries b = binomial_series(1.0 / n, q, order);
        return ts_scale(ts_sub(TruncatedSeries::constant(1.0, order), ts_scale(b, tilt)), 1.0 / q);
    }
    if (f == "tempered_discrete_pgf") {
        double lambda = get(p, "lambda"), a = get(p, "a"), gamma = get(p, "gamma");
        TruncatedSeries b = binomial_series(gamma, a, order);
        return ts_exp(ts_add_const(ts_scale(b, -lambda), lambda * std::pow(1.0 - a, gamma)));
    }
    if (f == "tempered_discrete_q_pgf") {
        double a = get(p, "a"), gamma = get(p, "gamma");
        int n = get_index(p, "n");
        double w = 1.0 / static_cast<double>(n);
        TruncatedSeries inner = ts_add_const(ts_scale(binomial_series(gamma, a, order), w),
                                             (1.0 - w) * std::pow(1.0 - a, gamma));
        TruncatedSeries s = ts_pow_real(inner, 1.0 / gamma);
        return ts_scale(ts_sub(TruncatedSeries::constant(1.0, order), s), 1.0 / a);
    }
    if (f == "sibuya_pgf") {
        double gamma = get(p, "gamma");
        return ts_sub(TruncatedSeries::constant(1.0, order), binomial_series(gamma, 1.0, order));
    }
    if (f == "sibuya_q_pgf") {
        double gamma = get(p, "gamma");
        int n = get_index(p, "n");
        TruncatedSeries w =
            ts_sub(TruncatedSeries::constant(1.0, order), binomial_series(gamma, 1.0, order));
        TruncatedSeries wn = ts_pow_int(w, n);
        TruncatedSeries body =
            ts_pow_real(ts_sub(TruncatedSeries::constant(1.0, order), wn), 1.0 / gamma);
        return ts_sub(TruncatedSeries::constant(1.0, order), body);
    }
    if (f == "chebyshev_q_pgf") {
        int n = get_index(p, "n");
        std::vector<double> t = chebyshev_coeffs(n);
        // R(z) = z^n T_n(1/z); Q_n = z^n / R(z).
        TruncatedSeries r(order);
        for (int j = 0; j <= n && j <= order; ++j) r = ts_with_coeff(r, j, t[static_cast<size_t>(n - j)]);
        return ts_shift_up(ts_pow_real(r, -1.0), n);
    }
    if (f == "srw_passage_pgf") {
        int m = get_index(p, "m");
        TruncatedSeries b = binomial_series(0.5, 1.0, order); // coeffs of (1-w)^{1/2}
        TruncatedSeries sq(order);                             // sqrt(1 - z^2)
        for (int k = 0; 2 * k <= order; ++k) sq = ts_with_coeff(sq, 2 * k, b[k]);
        TruncatedSeries num = ts_sub(TruncatedSeries::constant(1.0, order), sq);
        TruncatedSeries base = ts_div(num, TruncatedSeries::identity(order));
        return ts_pow_int(base, m);
    }
    throw std::invalid_argument("pgf_series: no expansion rule for family '" + f + "'");
}

TruncatedSeries pgf_apply_series(const Transform& outer_pgf, const TruncatedSeries& inner) {
    const int order = inner.order();
    if (inner[0] == 0.0) return ts_compose(pgf_series(outer_pgf, order), inner);
    // Nonzero inner constant: re-expand the outer closed form about it.
    const std::string& f = outer_pgf.family();
    const ParamMap& p = outer_pgf.params();
    TruncatedSeries one = TruncatedSeries::constant(1.0, order);
    if (f == "geometric_pgf") {
        double q = get(p, "p");
        TruncatedSeries den = ts_add_const(ts_scale(inner, -q), 1.0);
        return ts_scale(ts_pow_real(den, -1.0), 1.0 - q);
    }
    if (f == "tempered_discrete_pgf") {
        double lambda = get(p, "lambda"), a = get(p, "a"), gamma = get(p, "gamma");
        TruncatedSeries base = ts_add_const(ts_scale(inner, -a), 1.0);
        TruncatedSeries t = ts_pow_real(base, gamma);
        return ts_exp(ts_add_const(ts_scale(t, -lambda), lambda * std::pow(1.0 - a, gamma)));
    }
    if (f == "sibuya_pgf") {
        double gamma = get(p, "gamma");
        return ts_sub(one, ts_pow_real(ts_sub(one, inner), gamma));
    }
    if (f == "srw_passage_pgf") {
        int m = get_index(p, "m");
        TruncatedSeries sq = ts_pow_real(ts_sub(one, ts_mul(inner, inner)), 0.5);
        TruncatedSeries base = ts_mul(ts_sub(one, sq), ts_pow_real(inner, -1.0));
        return ts_pow_int(base, m);
    }
    throw std::invalid_argument("pgf_apply_series: re-expansion not available for family '" + f + "'");
}

EmpiricalTransform empirical_transform(Kind kind, const std::vector<double>& samples,
                                       const std::vector<double>& points) {
    if (samples.empty()) throw std::invalid_argument("empirical_transform: empty sample");
    if (samples.size() < 1000)
        throw std::invalid_argument("empirical_transform: need at least 1000 samples");
    if (kind != Kind::Chf && kind != Kind::Pgf && kind != Kind::Survival)
        throw std::invalid_argument("empirical_transform: kind must be CHF, PGF or SURVIVAL");
    const double n = static_cast<double>(samples.size());
    if (kind == Kind::Pgf) {
        for (double x : samples)
            if (x < 0 || std::abs(x - std::round(x)) > 1e-9)
                throw std::invalid_argument("empirical_transform: PGF needs integer samples");
    }
    EmpiricalTransform out;
    out.kind = kind;
    out.points = points;
    out.values.reserve(points.size());
    out.std_errors.reserve(points.size());
    for (double pt : points) {
        if (kind == Kind::Chf) {
            double mc = 0, ms = 0, mc2 = 0, ms2 = 0;
            for (double x : samples) {
                double c = std::cos(pt * x), s = std::sin(pt * x);
                mc += c; ms += s; mc2 += c * c; ms2 += s * s;
            }
            mc /= n; ms /= n; mc2 /= n; ms2 /= n;
            out.values.push_back(Complex(mc, ms));
            out.std_errors.push_back(std::sqrt(std::max(0.0, mc2 - mc * mc + ms2 - ms * ms) / n));
        } else if (kind == Kind::Pgf) {
            double m1 = 0, m2 = 0;
            for (double x : samples) {
                double v = (x == 0.0) ? 1.0 : std::pow(pt, x);
                m1 += v; m2 += v * v;
            }
            m1 /= n; m2 /= n;
            out.values.push_back(Complex(m1, 0));
            out.std_errors.push_back(std::sqrt(std::max(0.0, m2 - m1 * m1) / n));
        } else {
            double frac = 0;
            for (double x : samples) frac += (x > pt) ? 1.0 : 0.0;
            frac /= n;
            out.values.push_back(Complex(frac, 0));
            out.std_errors.push_back(std::sqrt(std::max(0.0, frac * (1.0 - frac)) / n));
        }
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v;
    if (count <= 1) { v.push_back(lo); return v; }
    v.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        v.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    return v;
}

std::vector<double> logspace(double exp_lo, double exp_hi, int count) {
    std::vector<double> v = linspace(exp_lo, exp_hi, count);
    for (double& x : v) x = std::pow(10.0, x);
    return v;
}

std::vector<double> default_grid(Kind kind, const DistributionSpec& dist) {
    switch (kind) {
        case Kind::Chf: {
            std::vector<double> pos = logspace(-1.0, 1.0, 25), grid;
            for (auto it = pos.rbegin(); it != pos.rend(); ++it) grid.push_back(-*it);
            grid.push_back(0.0);
            grid.insert(grid.end(), pos.begin(), pos.end());
            return grid;
        }
        case Kind::Laplace:
            return logspace(-2.0, 1.3, 30);
        case Kind::Pgf:
            return linspace(0.05, 0.95, 19);
        case Kind::Survival: {
            if (dist.family == "pareto") return logspace(0.0, 2.0, 30);
            if (dist.family == "gompertz_makeham") {
                double lambda = get_or(dist.params, "lambda", 1.0);
                auto g = logspace(-2.0, 0.7, 30);
                for (double& x : g) x /= lambda;
                return g;
            }
            double beta = get_or(dist.params, "beta", 1.0);
            auto g = logspace(-2.0, 1.0, 30);
            for (double& x : g) x *= beta;
            return g;
        }
        case Kind::Mellin: {
            Domain strip = dist.mellin_strip.value_or(Domain{-3.0, 3.0});
            double margin = 0.1 * (strip.hi - strip.lo);
            return linspace(strip.lo + margin, strip.hi - margin, 21);
        }
    }
    throw std::logic_error("default_grid: unreachable");
}

} // namespace cstab
