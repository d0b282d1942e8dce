#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cstab/series.hpp"

namespace cstab {

using Complex = std::complex<double>;
using ParamMap = std::map<std::string, double>;

// The five transform kinds used throughout: characteristic function f(t),
// Laplace transform L(s), probabilistic Mellin transform M(u) = E[X^u],
// probability generating function P(z), and survival function Fbar(x).
enum class Kind { Chf, Laplace, Mellin, Pgf, Survival };

const char* kind_name(Kind k);

// Admissible real evaluation interval, possibly open at either end.
struct Domain {
    double lo;
    double hi;
    bool open_lo = false;
    bool open_hi = false;
    bool contains(double x) const {
        if (open_lo ? !(x > lo) : !(x >= lo)) return false;
        if (open_hi ? !(x < hi) : !(x <= hi)) return false;
        return true;
    }
};

Domain all_reals();
Domain nonnegative_reals();

// An evaluable transform: a kind, a catalog family identifier, named real
// parameters, a validity domain and the evaluation map. Transforms whose
// closed form is exp{psi(.)} also register psi as the log evaluation, so that
// substitutions of the form e^{it} -> g(t) can use a continuous branch of
// ln g rather than a principal-value log. Monotone real transforms may also
// register a closed-form inverse used by the normalizer solver.
class Transform {
public:
    using Eval = std::function<Complex(double)>;
    using RealFn = std::function<double(double)>;

    Transform(Kind kind, std::string family, ParamMap params, Domain domain, Eval eval);

    // Domain-checked evaluation.
    Complex operator()(double point) const;

    // Evaluation that must be (numerically) real; throws if the imaginary
    // part exceeds 1e-14 * max(1, |value|).
    double real_at(double point) const;

    // ln T(point): the registered exponent when available, else principal log.
    Complex log_at(double point) const;

    Kind kind() const { return kind_; }
    const std::string& family() const { return family_; }
    const ParamMap& params() const { return params_; }
    const Domain& domain() const { return domain_; }
    double param(const std::string& name) const;

    Transform& with_log(Eval log_eval);
    Transform& with_inverse(RealFn inverse);
    bool has_inverse() const { return static_cast<bool>(inverse_); }
    double inverse(double y) const;

private:
    Kind kind_;
    std::string family_;
    ParamMap params_;
    Domain domain_;
    Eval eval_;
    Eval log_eval_;
    RealFn inverse_;
};

// Analytic one-sided pieces of a ch.f. on the whole line, written as
// functions of w where w stands for "it": f(t) = plus(it) + minus(-it).
// Random normalization substitutes w -> ln g(t) in the plus part and
// w -> ln g(-t) in the minus part.
struct ChfComponents {
    std::function<Complex(Complex)> plus;
    std::function<Complex(Complex)> minus;
};

// Analytic split of a Mellin transform at x = 1: lower(u) integrates over
// (0,1), upper(u) over [1, inf); M(u) = lower(u) + upper(u). One-sided laws
// supported in [1, inf) have lower == 0.
struct MellinComponents {
    std::function<Complex(Complex)> lower;
    std::function<Complex(Complex)> upper;
};

// A catalog distribution bound to its available transform kinds, sampler
// availability, and (for Mellin checks) a finite working strip.
struct DistributionSpec {
    std::string family;
    ParamMap params;
    std::string support;
    std::vector<Kind> kinds;
    bool has_sampler = false;
    std::optional<Domain> mellin_strip;

    bool has_kind(Kind k) const;
};

// Closed-form transform catalog; covers both the distribution transforms and
// every reference normalizer family. Throws std::invalid_argument for unknown
// families or out-of-range parameters.
Transform make_transform(const std::string& family, const ParamMap& params);

// Distribution registry (family ids: positive_stable, tempered_stable,
// laplace, gamma, geometric, tempered_discrete, sibuya, srw_passage,
// lognormal, double_pareto, double_pareto_unnormalized, log_levy, pareto, weibull,
// gompertz_makeham).
DistributionSpec make_distribution(const std::string& family, const ParamMap& params);

// The transform of the given kind for a catalog distribution.
Transform distribution_transform(const DistributionSpec& dist, Kind kind);

bool has_chf_components(const DistributionSpec& dist);
ChfComponents chf_components(const DistributionSpec& dist);
bool has_mellin_components(const DistributionSpec& dist);
MellinComponents mellin_components(const DistributionSpec& dist);

// Series expansion of a catalog p.g.f. (distribution or normalizer) to the
// given order.
TruncatedSeries pgf_series(const Transform& pgf, int order);

// Series of outer(inner(z)) where outer is a catalog p.g.f. When inner has
// zero constant term this is plain series composition; otherwise the outer
// family must support re-expansion about the shifted point (exp / power /
// rational closed forms do).
TruncatedSeries pgf_apply_series(const Transform& outer_pgf, const TruncatedSeries& inner);

// Pointwise empirical transform estimates with per-point standard errors.
struct EmpiricalTransform {
    Kind kind;
    std::vector<double> points;
    std::vector<Complex> values;
    std::vector<double> std_errors;
};

// kind must be Chf, Pgf or Survival; requires at least 1000 samples, and
// integer-valued samples for the Pgf kind.
EmpiricalTransform empirical_transform(Kind kind, const std::vector<double>& samples,
                                       const std::vector<double>& points);

// Evenly spaced points, and points log-spaced between 10^a and 10^b.
std::vector<double> linspace(double lo, double hi, int count);
std::vector<double> logspace(double exp_lo, double exp_hi, int count);

// Standard verification grids per kind. For Mellin the distribution's working
// strip is shrunk by a 10% margin on each side; for Survival the grid is
// log-spaced over a per-family scale.
std::vector<double> default_grid(Kind kind, const DistributionSpec& dist);

} // namespace cstab
