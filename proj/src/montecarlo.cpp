#include "cstab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cstab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

} // namespace

std::uint64_t Rng::next_u64() { return splitmix_next(state_); }

double Rng::next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::next_open() {
    double u;
    do { u = next_double(); } while (u <= 0.0);
    return u;
}

double Rng::next_exp() { return -std::log(next_open()); }

double Rng::next_normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = next_open(), u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

Rng derive_stream(std::uint64_t seed, const std::string& tag, std::uint64_t index) {
    std::uint64_t s = seed;
    s = splitmix_next(s) ^ fnv1a(tag);
    s = splitmix_next(s) ^ index;
    (void)splitmix_next(s);
    return Rng(s);
}

namespace {

double sample_gamma_shape(double shape, Rng& rng) {
    // Marsaglia-Tsang squeeze; shapes below one are boosted and corrected.
    if (shape < 1.0) {
        double u = rng.next_open();
        return sample_gamma_shape(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = rng.next_normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = rng.next_open();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

double sample_poisson(double mu, Rng& rng) {
    // Product-of-uniforms inversion; fine for the catalog's small intensities.
    if (mu <= 0.0) return 0.0;
    double limit = std::exp(-mu), prod = rng.next_open();
    double k = 0.0;
    while (prod > limit) {
        prod *= rng.next_open();
        k += 1.0;
    }
    return k;
}

// Sibuya(gamma) survival P(X > k) = Gamma(k+1-gamma) / (Gamma(1-gamma) Gamma(k+1)).
double sibuya_log_survival(double gamma, double k) {
    return std::lgamma(k + 1.0 - gamma) - std::lgamma(k + 1.0) - std::lgamma(1.0 - gamma);
}

double sample_sibuya(double gamma, Rng& rng) {
    double lu = std::log(rng.next_open());
    if (sibuya_log_survival(gamma, 1.0) < lu) return 1.0;
    // Gallop then bisect on the integer survival function. Beyond 2^53 the
    // doubles cannot resolve consecutive integers, so the search stops once
    // the bracket has no representable interior point; the 1-ulp value error
    // out there is far below distributional resolution.
    double lo = 1.0, hi = 2.0;
    while (sibuya_log_survival(gamma, hi) >= lu) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return hi;
    }
    while (hi - lo > 0.5) {
        double mid = std::floor((lo + hi) / 2.0);
        if (mid <= lo || mid >= hi) break;
        if (sibuya_log_survival(gamma, mid) >= lu) lo = mid; else hi = mid;
    }
    return hi;
}

// Sibuya tilted by a^k (the summand law of the tempered discrete family).
double sample_tempered_sibuya(double gamma, double a, Rng& rng) {
    if (a >= 1.0) return sample_sibuya(gamma, rng);
    for (;;) {
        double k = sample_sibuya(gamma, rng);
        double logacc = k * std::log(a);
        if (std::log(rng.next_open()) <= logacc) return k;
    }
}

// One-sided positive stable with E exp(-s X) = exp(-s^alpha) (Kanter's form).
double sample_positive_stable(double alpha, Rng& rng) {
    double theta = kPi * rng.next_open();
    double w = rng.next_exp();
    double a = std::pow(std::sin((1.0 - alpha) * theta), 1.0 - alpha) *
               std::pow(std::sin(alpha * theta), alpha) / std::sin(theta);
    a = std::pow(a, 1.0 / (1.0 - alpha));
    return std::pow(a / w, (1.0 - alpha) / alpha);
}

} // namespace

bool has_registered_sampler(const DistributionSpec& dist) { return dist.has_sampler; }

double sample_one(const DistributionSpec& dist, Rng& rng) {
    const auto& f = dist.family;
    const auto& p = dist.params;
    if (f == "gamma") return sample_gamma_shape(p.at("gamma"), rng) * p.at("b");
    if (f == "geometric") {
        double pr = p.at("p");
        return std::floor(std::log(rng.next_open()) / std::log(pr));
    }
    if (f == "laplace") {
        double a = p.at("a");
        double sign = rng.next_double() < 0.5 ? -1.0 : 1.0;
        return sign * a * rng.next_exp();
    }
    if (f == "weibull") return p.at("beta") * std::pow(rng.next_exp(), 1.0 / p.at("alpha"));
    if (f == "pareto") return std::pow(rng.next_open(), -1.0 / p.at("alpha"));
    if (f == "gompertz_makeham")
        return std::log1p(rng.next_exp() / p.at("xi")) / p.at("lambda");
    if (f == "lognormal") return std::exp(p.at("b") * rng.next_normal());
    if (f == "double_pareto") {
        double a = p.at("a");
        double u = rng.next_open();
        return rng.next_double() < 0.5 ? std::pow(u, 1.0 / a) : std::pow(u, -1.0 / a);
    }
    if (f == "sibuya") return sample_sibuya(p.at("gamma"), rng);
    if (f == "tempered_discrete") {
        double lambda = p.at("lambda"), a = p.at("a"), gamma = p.at("gamma");
        double mu = lambda * (1.0 - std::pow(1.0 - a, gamma));
        double n = sample_poisson(mu, rng);
        double total = 0.0;
        for (double i = 0; i < n; ++i) total += sample_tempered_sibuya(gamma, a, rng);
        return total;
    }
    if (f == "positive_stable") return sample_positive_stable(p.at("alpha"), rng);
    throw std::invalid_argument("sample_one: no sampler registered for '" + f + "'");
}

std::vector<double> sample_distribution(const DistributionSpec& dist, std::size_t count,
                                        std::uint64_t seed) {
    if (!dist.has_sampler)
        throw std::invalid_argument("sample_distribution: no sampler registered for '" +
                                    dist.family + "'");
    Rng rng = derive_stream(seed, "dist:" + dist.family, 0);
    std::vector<double> out(count);
    for (auto& x : out) x = sample_one(dist, rng);
    return out;
}

namespace {

// Sampler for a normalizer p.g.f. member; only the reference geometric family
// is registered (atom at zero plus a geometrically tilted Sibuya(1/n)).
double sample_normalizer_pgf(const Transform& q, Rng& rng) {
    if (q.family() == "geometric_q_pgf") {
        double p = q.param("p");
        int n = static_cast<int>(std::round(q.param("n")));
        double q0 = (1.0 - std::pow(1.0 - p, 1.0 - 1.0 / n)) / p;
        if (rng.next_double() < q0) return 0.0;
        return sample_tempered_sibuya(1.0 / n, p, rng);
    }
    if (q.family() == "unit_pgf") return 1.0;
    throw std::invalid_argument("sample_normalized: no sampler for normalizer '" + q.family() + "'");
}

double gbar_inverse(const Transform& gbar, double y) {
    if (gbar.has_inverse()) return gbar.inverse(y);
    return invert_monotone([&gbar](double x) { return gbar.real_at(x); }, y, 0.0, 1.0, false);
}

} // namespace

std::vector<double> sample_normalized(const DistributionSpec& dist, const NormalizerFamily& fam,
                                      int n, SystemKind system, std::size_t count,
                                      std::uint64_t seed) {
    Rng rng = derive_stream(seed, "norm:" + dist.family + ":" + fam.id, static_cast<std::uint64_t>(n));
    Transform member = fam.member(n);
    std::vector<double> out(count);
    switch (system) {
        case SystemKind::Additive: {
            if (member.kind() != Kind::Pgf)
                throw std::invalid_argument(
                    "sample_normalized: additive continuous normalizations have no sampler; "
                    "verify them at the transform level");
            for (auto& v : out) {
                double x = sample_one(dist, rng);
                double total = 0.0;
                for (double i = 0; i < x; ++i) total += sample_normalizer_pgf(member, rng);
                v = total;
            }
            return out;
        }
        case SystemKind::Min: {
            for (auto& v : out) {
                double x = sample_one(dist, rng);
                v = gbar_inverse(member, std::exp(-x));
            }
            return out;
        }
        case SystemKind::Product: {
            if (member.family() != "power_mellin")
                throw std::invalid_argument(
                    "sample_normalized: only degenerate power normalizers are samplable "
                    "in product systems");
            double c = member.param("c");
            for (auto& v : out) v = std::pow(sample_one(dist, rng), c);
            return out;
        }
        case SystemKind::Max:
            throw std::invalid_argument("sample_normalized: max systems are not samplable here");
    }
    throw std::logic_error("sample_normalized: unreachable");
}

KsDistance ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    KsDistance out;
    while (i < a.size() && j < b.size()) {
        double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        double fa = static_cast<double>(i) / na;
        double fb = static_cast<double>(j) / nb;
        out.d_plus = std::max(out.d_plus, fa - fb);
        out.d_minus = std::max(out.d_minus, fb - fa);
    }
    out.d = std::max(out.d_plus, out.d_minus);
    return out;
}

double ks_critical_1pct(std::size_t n, std::size_t m) {
    double dn = static_cast<double>(n), dm = static_cast<double>(m);
    return 1.628 * std::sqrt((dn + dm) / (dn * dm));
}

SimulationReport simulate_and_test(const StabilityClaim& claim, int n, std::size_t count,
                                   std::uint64_t seed) {
    SimulationReport rep;
    rep.count = count;
    rep.seed = seed;
    rep.n = n;

    auto combine = [&](std::vector<double>& acc, const std::vector<double>& next) {
        for (std::size_t k = 0; k < acc.size(); ++k) {
            switch (claim.system) {
                case SystemKind::Additive: acc[k] += next[k]; break;
                case SystemKind::Product: acc[k] *= next[k]; break;
                case SystemKind::Min: acc[k] = std::min(acc[k], next[k]); break;
                case SystemKind::Max: acc[k] = std::max(acc[k], next[k]); break;
            }
        }
    };

    std::vector<double> lhs, rhs;
    if (claim.definition == DefinitionKind::Pursuit) {
        // One normalized element against the n-fold system of originals.
        lhs = sample_normalized(claim.distribution, claim.normalizers, n, claim.system, count,
                                seed ^ 0x517CC1B727220A95ull);
        rhs = sample_distribution(claim.distribution, count, seed);
        for (int j = 1; j < n; ++j) {
            Rng rng = derive_stream(seed, "orig:" + claim.distribution.family,
                                    static_cast<std::uint64_t>(j));
            std::vector<double> next(count);
            for (auto& x : next) x = sample_one(claim.distribution, rng);
            combine(rhs, next);
        }
    } else {
        lhs = sample_distribution(claim.distribution, count, seed);
        for (int j = 0; j < n; ++j) {
            std::vector<double> next =
                sample_normalized(claim.distribution, claim.normalizers, n, claim.system, count,
                                  seed ^ (0x9E3779B97F4A7C15ull * (j + 1)));
            if (j == 0) rhs = std::move(next);
            else combine(rhs, next);
        }
    }

    rep.ks = ks_two_sample(lhs, rhs);
    rep.critical = ks_critical_1pct(count, count);
    rep.pass = rep.ks.d < rep.critical;

    // Empirical-transform cross-check on a few interior points.
    Kind ek = claim.check_kind == Kind::Mellin || claim.check_kind == Kind::Laplace
                  ? Kind::Survival
                  : claim.check_kind;
    std::vector<double> pts;
    if (ek == Kind::Pgf) pts = {0.25, 0.5, 0.75};
    else if (ek == Kind::Survival) {
        std::vector<double> sorted = lhs;
        std::sort(sorted.begin(), sorted.end());
        pts = {sorted[count / 4], sorted[count / 2], sorted[3 * count / 4]};
    } else pts = {0.25, 0.5, 1.0};
    EmpiricalTransform ea = empirical_transform(ek, lhs, pts);
    EmpiricalTransform eb = empirical_transform(ek, rhs, pts);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        double se = std::hypot(ea.std_errors[k], eb.std_errors[k]);
        if (se <= 0.0) continue;
        rep.transform_max_dev_se =
            std::max(rep.transform_max_dev_se, std::abs(ea.values[k] - eb.values[k]) / se);
    }
    return rep;
}

void write_samples_csv(const SampleRun& run, std::ostream& os) {
    os << "# distribution=" << run.distribution << " normalizer=" << run.normalizer
       << " system=" << run.system << " n=" << run.n << " seed=" << run.seed << "\n";
    os << "value\n";
    char buf[64];
    for (double v : run.samples) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        os << buf;
    }
}

} // namespace cstab
