#include "cstab/normalize.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace cstab {

const char* definition_name(DefinitionKind d) {
    switch (d) {
        case DefinitionKind::Cs: return "CS";
        case DefinitionKind::Pursuit: return "PURSUIT";
        case DefinitionKind::Nu: return "NU";
    }
    return "?";
}

const char* system_name(SystemKind s) {
    switch (s) {
        case SystemKind::Additive: return "ADDITIVE";
        case SystemKind::Product: return "PRODUCT";
        case SystemKind::Min: return "MIN";
        case SystemKind::Max: return "MAX";
    }
    return "?";
}

Transform normalize_onesided(const Transform& T, const Transform& g) {
    if (T.kind() == Kind::Laplace && g.kind() == Kind::Laplace) {
        auto Tp = std::make_shared<Transform>(T);
        auto gp = std::make_shared<Transform>(g);
        return Transform(Kind::Laplace, "normalized:" + T.family(), T.params(), g.domain(),
                         [Tp, gp](double s) {
                             double arg = -gp->log_at(s).real();
                             return (*Tp)(arg);
                         });
    }
    if (T.kind() == Kind::Pgf && g.kind() == Kind::Pgf) return normalize_pgf(T, g);
    throw std::invalid_argument("normalize_onesided: incompatible transform kinds (" +
                                std::string(kind_name(T.kind())) + " with " +
                                kind_name(g.kind()) + ")");
}

Transform normalize_twosided_chf(const ChfComponents& f, const Transform& g) {
    if (g.kind() != Kind::Chf)
        throw std::invalid_argument("normalize_twosided_chf: normalizer must be a ch.f.");
    auto gp = std::make_shared<Transform>(g);
    auto fc = std::make_shared<ChfComponents>(f);
    return Transform(Kind::Chf, "normalized_chf", g.params(), all_reals(),
                     [fc, gp](double t) {
                         return fc->plus(gp->log_at(t)) + fc->minus(gp->log_at(-t));
                     });
}

Transform normalize_mellin_twosided(const MellinComponents& m, const Transform& N) {
    auto Np = std::make_shared<Transform>(N);
    auto mc = std::make_shared<MellinComponents>(m);
    return Transform(Kind::Mellin, "normalized_mellin", N.params(), N.domain(),
                     [mc, Np](double u) {
                         if (!Np->domain().contains(-u))
                             throw std::domain_error("normalize_mellin: -u outside normalizer domain");
                         return mc->lower(-Np->log_at(-u)) + mc->upper(Np->log_at(u));
                     });
}

Transform normalize_min(const Transform& fbar, const Transform& gbar) {
    if (fbar.kind() != Kind::Survival || gbar.kind() != Kind::Survival)
        throw std::invalid_argument("normalize_min: both transforms must be survival functions");
    auto fp = std::make_shared<Transform>(fbar);
    auto gp = std::make_shared<Transform>(gbar);
    return Transform(Kind::Survival, "normalized:" + fbar.family(), fbar.params(), gbar.domain(),
                     [fp, gp](double x) {
                         double gv = gp->real_at(x);
                         if (gv <= 0.0) return Complex(0.0, 0.0); // Fbar vanishes at infinity
                         double arg = -std::log(gv);
                         return (*fp)(arg);
                     });
}

Transform normalize_pgf(const Transform& P, const Transform& Q) {
    if (P.kind() != Kind::Pgf || Q.kind() != Kind::Pgf)
        throw std::invalid_argument("normalize_pgf: both transforms must be p.g.f.s");
    auto Pp = std::make_shared<Transform>(P);
    auto Qp = std::make_shared<Transform>(Q);
    return Transform(Kind::Pgf, "normalized:" + P.family(), P.params(), Domain{0.0, 1.0},
                     [Pp, Qp](double z) {
                         double w = Qp->real_at(z);
                         if (w < -1e-12 || w > 1.0 + 1e-12)
                             throw std::domain_error("normalize_pgf: Q(z) outside [0,1]");
                         return (*Pp)(std::min(1.0, std::max(0.0, w)));
                     });
}

double invert_monotone(const std::function<double(double)>& f, double target, double lo_hint,
                       double hi_hint, bool increasing) {
    double lo = lo_hint, hi = hi_hint;
    auto above = [&](double x) { return increasing ? f(x) >= target : f(x) <= target; };
    // Grow the bracket geometrically until [lo, hi] straddles the target.
    int guard = 0;
    while (!above(hi)) {
        lo = hi;
        hi = hi == 0.0 ? 1e-3 : hi * 2.0;
        if (++guard > 2100) throw std::domain_error("invert_monotone: target outside range");
    }
    guard = 0;
    while (above(lo) && lo > 0.0) {
        hi = lo;
        lo /= 2.0;
        if (lo < 1e-300) { lo = 0.0; break; }
        if (++guard > 2100) break;
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (above(mid)) hi = mid; else lo = mid;
        if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Real inverse of a transform, preferring a registered closed form.
double invert_transform(const Transform& T, double y, bool increasing) {
    if (T.has_inverse()) return T.inverse(y);
    auto f = [&T](double x) { return T.real_at(x); };
    if (T.kind() == Kind::Pgf) {
        // P is nondecreasing on [0,1]; bisect there directly.
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if (f(mid) >= y) hi = mid; else lo = mid;
            if (hi - lo <= 1e-14) break;
        }
        return 0.5 * (lo + hi);
    }
    double lo_hint = T.domain().open_lo ? 1e-12 : std::max(0.0, T.domain().lo);
    return invert_monotone(f, y, lo_hint, std::max(1.0, lo_hint * 2.0), increasing);
}

} // namespace

Transform solve_normalizer(const Transform& T, DefinitionKind definition, double index) {
    if (definition == DefinitionKind::Nu)
        throw std::invalid_argument("solve_normalizer: no generic solver for the nu definition");
    if (!(index > 0)) throw std::invalid_argument("solve_normalizer: index must be positive");
    const double power = definition == DefinitionKind::Cs ? 1.0 / index : index;
    auto Tp = std::make_shared<Transform>(T);
    std::string id = "solved:" + T.family();
    switch (T.kind()) {
        case Kind::Laplace: {
            auto psi = [Tp, power](double s) {
                double target = std::pow(Tp->real_at(s), power);
                return -invert_transform(*Tp, target, false);
            };
            Transform g(Kind::Laplace, id, T.params(), T.domain(),
                        [psi](double s) { return Complex(std::exp(psi(s)), 0); });
            g.with_log([psi](double s) { return Complex(psi(s), 0); });
            return g;
        }
        case Kind::Pgf: {
            return Transform(Kind::Pgf, id, T.params(), Domain{0.0, 1.0},
                             [Tp, power](double z) {
                                 double target = std::pow(Tp->real_at(z), power);
                                 return Complex(invert_transform(*Tp, target, true), 0);
                             });
        }
        case Kind::Survival: {
            auto psi = [Tp, power](double x) {
                double target = std::pow(Tp->real_at(x), power);
                return -invert_transform(*Tp, target, false);
            };
            Transform g(Kind::Survival, id, T.params(), T.domain(),
                        [psi](double x) { return Complex(std::exp(psi(x)), 0); });
            g.with_log([psi](double x) { return Complex(psi(x), 0); });
            g.with_inverse([Tp, power](double y) {
                // Gbar(x) = y  <=>  Fbar(x)^power = Fbar(-ln y).
                double t = Tp->real_at(-std::log(y));
                return invert_transform(*Tp, std::pow(t, 1.0 / power), false);
            });
            return g;
        }
        case Kind::Mellin: {
            // Returned on the log scale: L(s) = N(-s) = exp{M^{-1}(M(-s)^power)}.
            if (!T.domain().contains(-1e-6))
                throw std::invalid_argument("solve_normalizer: Mellin strip must cover u < 0");
            auto psi = [Tp, power](double s) {
                double target = std::pow(Tp->real_at(-s), power);
                // M is increasing in u on the catalog strips; invert on u <= 0.
                auto f = [Tp](double u) { return Tp->real_at(u); };
                double lo = -1.0;
                int guard = 0;
                while (f(lo) > target && ++guard < 2100) lo *= 2.0;
                double hi = 0.0;
                for (int it = 0; it < 200; ++it) {
                    double mid = 0.5 * (lo + hi);
                    if (f(mid) >= target) hi = mid; else lo = mid;
                    if (hi - lo <= 1e-13 * std::max(1.0, std::abs(lo))) break;
                }
                return 0.5 * (lo + hi);
            };
            Transform g(Kind::Laplace, id, T.params(), nonnegative_reals(),
                        [psi](double s) { return Complex(std::exp(psi(s)), 0); });
            g.with_log([psi](double s) { return Complex(psi(s), 0); });
            return g;
        }
        case Kind::Chf:
            throw std::invalid_argument("solve_normalizer: ch.f. solving is not supported; "
                                        "use the Laplace or Mellin representation");
    }
    throw std::logic_error("solve_normalizer: unreachable");
}

NormalizerFamily make_normalizer_family(const std::string& id, const ParamMap& params) {
    NormalizerFamily fam;
    fam.id = id;
    fam.provenance = Provenance::Catalog;
    auto p = params;
    if (id == "degenerate") {
        int kind_code = static_cast<int>(params.count("kind") ? params.at("kind") : 1.0);
        Kind k = static_cast<Kind>(kind_code);
        fam.kind = k;
        fam.provenance = Provenance::Degenerate;
        static const char* units[] = {"unit_chf", "unit_laplace", "unit_mellin", "unit_pgf",
                                      "unit_survival"};
        std::string unit = units[kind_code];
        fam.member = [unit](int) { return make_transform(unit, {}); };
        return fam;
    }
    if (id == "stable_scale") {
        fam.kind = Kind::Laplace;
        fam.provenance = Provenance::Degenerate;
        fam.member = [p](int n) {
            ParamMap q = p;
            q["n"] = n;
            return make_transform("stable_scale_laplace", q);
        };
        return fam;
    }
    auto reference = [&](Kind k, const char* family) {
        fam.kind = k;
        std::string f = family;
        fam.member = [p, f](int n) {
            ParamMap q = p;
            q["n"] = n;
            return make_transform(f, q);
        };
    };
    if (id == "tempered_stable_reference") { reference(Kind::Laplace, "tempered_stable_g_laplace"); return fam; }
    if (id == "laplace_reference") { reference(Kind::Chf, "laplace_g_chf"); return fam; }
    if (id == "gamma_reference") { reference(Kind::Laplace, "gamma_g_laplace"); return fam; }
    if (id == "geometric_reference") { reference(Kind::Pgf, "geometric_q_pgf"); return fam; }
    if (id == "tempered_discrete_reference") { reference(Kind::Pgf, "tempered_discrete_q_pgf"); return fam; }
    if (id == "sibuya_reference") { reference(Kind::Pgf, "sibuya_q_pgf"); return fam; }
    if (id == "chebyshev") { reference(Kind::Pgf, "chebyshev_q_pgf"); return fam; }
    if (id == "double_pareto_unnormalized_n") { reference(Kind::Mellin, "double_pareto_unnormalized_n_mellin"); return fam; }
    if (id == "double_pareto_matched") {
        reference(Kind::Mellin, "double_pareto_matched_n_mellin");
        fam.provenance = Provenance::EquationSolved;
        return fam;
    }
    if (id == "pareto_chf_reference") { reference(Kind::Chf, "pareto_g_chf"); return fam; }
    if (id == "gm_reference") { reference(Kind::Survival, "gm_gbar_survival"); return fam; }
    if (id == "power_scale") {
        // Degenerate product normalization with scale exponent rule c_n = n^e.
        double e = params.at("exponent");
        fam.kind = Kind::Mellin;
        fam.provenance = Provenance::Degenerate;
        fam.member = [e](int n) {
            ParamMap q;
            q["c"] = std::pow(static_cast<double>(n), e);
            return make_transform("power_mellin", q);
        };
        return fam;
    }
    if (id == "min_exp_rate") {
        double alpha = params.at("alpha");
        double sign = params.count("sign") ? params.at("sign") : -1.0;
        fam.kind = Kind::Survival;
        fam.member = [alpha, sign](int n) {
            ParamMap q;
            q["rate"] = std::pow(static_cast<double>(n), sign / alpha);
            return make_transform("min_exp_survival", q);
        };
        return fam;
    }
    if (id == "pareto_min") {
        double sign = params.count("sign") ? params.at("sign") : -1.0;
        fam.kind = Kind::Survival;
        fam.member = [sign](int n) {
            ParamMap q;
            q["q"] = std::pow(static_cast<double>(n), sign);
            return make_transform("power_min_survival", q);
        };
        return fam;
    }
    throw std::invalid_argument("make_normalizer_family: unknown family '" + id + "'");
}

NormalizerFamily solved_normalizer_family(const Transform& T, DefinitionKind definition) {
    NormalizerFamily fam;
    fam.kind = T.kind() == Kind::Mellin ? Kind::Laplace : T.kind();
    fam.id = "solved:" + T.family();
    fam.provenance = Provenance::EquationSolved;
    fam.closed_form = T.has_inverse();
    auto Tp = std::make_shared<Transform>(T);
    fam.member = [Tp, definition](int n) {
        return solve_normalizer(*Tp, definition, static_cast<double>(n));
    };
    return fam;
}

} // namespace cstab
