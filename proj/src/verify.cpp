#include "cstab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace cstab {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::InvalidNormalizer: return "INVALID_NORMALIZER";
        case Verdict::Unresolved: return "UNRESOLVED";
    }
    return "?";
}

double residual_metric(Complex lhs, Complex rhs) {
    double r = std::abs(lhs - rhs);
    return std::abs(rhs) > 1.0 ? r / std::abs(rhs) : r;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// The base transform the residuals compare against. Product checks on the
// ch.f. scale rebuild f(t) = M(it) from the Mellin split so both sides use
// the same analytic object.
Complex base_value(const StabilityClaim& c, const Transform& base,
                   const std::optional<MellinComponents>& mc, double x) {
    if (c.system == SystemKind::Product && c.check_kind == Kind::Chf) {
        Complex it(0.0, x);
        return mc->lower(it) + mc->upper(it);
    }
    return base(x);
}

Transform normalized_transform(const StabilityClaim& c, const Transform& base,
                               const Transform& member,
                               const std::optional<ChfComponents>& fc,
                               const std::optional<MellinComponents>& mc) {
    switch (c.system) {
        case SystemKind::Additive:
            if (c.check_kind == Kind::Chf) return normalize_twosided_chf(*fc, member);
            return normalize_onesided(base, member);
        case SystemKind::Product: {
            if (c.check_kind == Kind::Chf) {
                auto m = std::make_shared<MellinComponents>(*mc);
                auto g = std::make_shared<Transform>(member);
                return Transform(Kind::Chf, "normalized_mellin_chf", member.params(), all_reals(),
                                 [m, g](double t) {
                                     return m->lower(-g->log_at(-t)) + m->upper(g->log_at(t));
                                 });
            }
            return normalize_mellin_twosided(*mc, member);
        }
        case SystemKind::Min:
            return normalize_min(base, member);
        case SystemKind::Max:
            throw std::invalid_argument("check_stability: max systems go through the nu checker");
    }
    throw std::logic_error("normalized_transform: unreachable");
}

std::vector<double> bochner_points() {
    return {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0};
}

// Validity screens for one normalizer member, by kind.
std::vector<DiagnosticResult> member_diagnostics(const Transform& member, bool gating,
                                                 int cm_order) {
    std::vector<DiagnosticResult> out;
    switch (member.kind()) {
        case Kind::Laplace: {
            CmDiagnostic cm = check_complete_monotone(member, cm_order);
            DiagnosticResult d{"complete_monotone", cm.pass, gating, cm.worst_violation, ""};
            if (!cm.pass)
                d.detail = "order " + std::to_string(cm.fail_order) + " difference changes sign near s=" +
                           fmt(cm.fail_point);
            out.push_back(std::move(d));
            break;
        }
        case Kind::Pgf: {
            try {
                PgfValidity v = check_pgf_validity(member, kDefaultSeriesOrder);
                DiagnosticResult d{"pgf_validity", v.valid, gating, v.value_at_one, ""};
                if (!v.valid && v.first_negative >= 0)
                    d.detail = "first negative coefficient at index " + std::to_string(v.first_negative);
                else if (!v.valid)
                    d.detail = "value at z=1 is " + fmt(v.value_at_one);
                out.push_back(std::move(d));
            } catch (const std::exception& e) {
                out.push_back({"pgf_validity", true, false, 0.0,
                               std::string("series expansion unavailable: ") + e.what()});
            }
            break;
        }
        case Kind::Chf: {
            PosDefDiagnostic pd = check_positive_definite(member, bochner_points());
            DiagnosticResult d{"positive_definite", pd.pass, gating, pd.min_eigenvalue, ""};
            if (!pd.pass) d.detail = "min eigenvalue " + fmt(pd.min_eigenvalue);
            // A ch.f. must also have g(0) = 1.
            double g0 = std::abs(member(0.0));
            if (std::abs(g0 - 1.0) > 1e-9) {
                d.pass = false;
                d.detail += (d.detail.empty() ? "" : "; ") + std::string("g(0) = ") + fmt(g0);
            }
            out.push_back(std::move(d));
            break;
        }
        case Kind::Survival: {
            DiagnosticResult d{"survival_validity", true, gating, 0.0, ""};
            double at0;
            try {
                at0 = member.real_at(member.domain().open_lo ? 1e-12 : member.domain().lo);
            } catch (const std::exception&) {
                at0 = 1.0;
            }
            if (std::abs(at0 - 1.0) > 1e-9) {
                d.pass = false;
                d.detail = "left-edge value " + fmt(at0);
            }
            double prev = 2.0;
            for (double x : logspace(-2.0, 2.0, 25)) {
                double v = member.real_at(x);
                if (v < -1e-12 || v > 1.0 + 1e-12 || v > prev + 1e-12) {
                    d.pass = false;
                    d.detail = "not a monotone [0,1] survival at x=" + fmt(x);
                    break;
                }
                prev = v;
            }
            d.value = at0;
            out.push_back(std::move(d));
            break;
        }
        case Kind::Mellin: {
            DiagnosticResult d{"stochastic_normalizer", true, gating, 0.0, ""};
            double n0 = std::abs(member(0.0));
            d.value = n0;
            if (std::abs(n0 - 1.0) > 1e-9) {
                d.pass = false;
                d.detail = "N(0) = " + fmt(n0) + " (not a unit-mass normalizer)";
            }
            out.push_back(std::move(d));
            break;
        }
    }
    return out;
}

} // namespace

VerificationReport check_stability(const StabilityClaim& claim) {
    if (claim.definition == DefinitionKind::Nu)
        throw std::invalid_argument("check_stability: NU claims use check_nu_stability");
    if (claim.grid.empty()) throw std::invalid_argument("check_stability: empty grid");
    if (!(claim.tol > 0)) throw std::invalid_argument("check_stability: tolerance must be positive");

    VerificationReport rep;
    rep.system = system_name(claim.system);
    rep.definition = definition_name(claim.definition);
    rep.distribution_family = claim.distribution.family;
    rep.distribution_params = claim.distribution.params;
    rep.normalizer_id = claim.normalizers.id;
    rep.check_kind = kind_name(claim.check_kind);
    rep.tol = claim.tol;
    rep.notes = claim.convention_notes;

    std::optional<ChfComponents> fc;
    std::optional<MellinComponents> mc;
    if (claim.system == SystemKind::Additive && claim.check_kind == Kind::Chf)
        fc = chf_components(claim.distribution);
    if (claim.system == SystemKind::Product) mc = mellin_components(claim.distribution);

    // Product checks on the ch.f. scale have no direct base transform; any
    // Mellin-capable family still provides one for the report echo.
    Transform base = claim.check_kind == Kind::Chf && claim.system == SystemKind::Product
                         ? distribution_transform(claim.distribution, Kind::Mellin)
                         : distribution_transform(claim.distribution, claim.check_kind);

    if (claim.system == SystemKind::Product) {
        double m0 = std::abs(base_value(claim, base, mc, 0.0));
        if (std::abs(m0 - 1.0) > 1e-9)
            rep.notes.push_back("distribution transform is non-stochastic: M(0) = " + fmt(m0) +
                                "; the claim is an algebraic identity check");
    }

    bool any_residual_fail = false;
    bool any_validity_fail = false;

    for (int n : claim.n_range) {
        NResult res;
        res.n = n;
        Transform member = claim.normalizers.member(n);
        Transform tilde = normalized_transform(claim, base, member, fc, mc);
        for (double x : claim.grid) {
            res.points.push_back(x);
            try {
                Complex lhs, rhs;
                Complex tv = tilde(x);
                Complex bv = base_value(claim, base, mc, x);
                if (claim.definition == DefinitionKind::Pursuit) {
                    lhs = tv;
                    rhs = std::pow(bv, static_cast<double>(n));
                } else if (claim.system == SystemKind::Product) {
                    lhs = tv;
                    rhs = std::pow(bv, 1.0 / n);
                    res.cross_residual = std::max(
                        res.cross_residual,
                        residual_metric(std::pow(tv, static_cast<double>(n)), bv));
                } else {
                    lhs = std::pow(tv, static_cast<double>(n));
                    rhs = bv;
                }
                double r = residual_metric(lhs, rhs);
                res.residuals.push_back(r);
                res.point_errors.emplace_back();
                res.worst = std::max(res.worst, r);
            } catch (const std::exception& e) {
                res.residuals.push_back(-1.0);
                res.point_errors.emplace_back(e.what());
            }
        }
        res.diagnostics = member_diagnostics(member, claim.gate_on_validity, claim.cm_order);
        for (const auto& d : res.diagnostics)
            if (d.gating && !d.pass) any_validity_fail = true;
        rep.worst_residual = std::max(rep.worst_residual, res.worst);
        if (res.worst > claim.tol) any_residual_fail = true;
        for (const auto& err : res.point_errors)
            if (!err.empty()) {
                rep.notes.push_back("n=" + std::to_string(n) + ": evaluation failures recorded");
                break;
            }
        rep.per_n.push_back(std::move(res));
    }

    if (any_residual_fail && claim.adjudicate_unresolved) {
        // The reference family fails the equation. Solve the equation for the
        // normalizer instead and screen the solution; if that also fails, the
        // case is evidence in both directions and stays unresolved.
        int n_bad = claim.n_range.front();
        for (const auto& r : rep.per_n)
            if (r.worst > claim.tol) { n_bad = r.n; break; }
        Transform solve_base = claim.distribution.has_kind(Kind::Mellin) &&
                                       claim.check_kind == Kind::Chf
                                   ? distribution_transform(claim.distribution, Kind::Mellin)
                                   : base;
        Transform solved = solve_normalizer(solve_base, claim.definition, n_bad);
        CmDiagnostic cm = check_complete_monotone(solved, claim.cm_order);
        rep.notes.push_back("reference normalizer residual " + fmt(rep.worst_residual) +
                            " exceeds tol at n=" + std::to_string(n_bad));
        if (!cm.pass) {
            rep.notes.push_back("equation-solved normalizer fails the order-" +
                                std::to_string(cm.fail_order) +
                                " complete-monotonicity screen near s=" + fmt(cm.fail_point));
            rep.verdict = Verdict::Unresolved;
            return rep;
        }
        rep.notes.push_back("equation-solved normalizer passes the monotonicity screen");
        rep.verdict = Verdict::Fail;
        return rep;
    }

    if (any_residual_fail) rep.verdict = Verdict::Fail;
    else if (any_validity_fail) rep.verdict = Verdict::InvalidNormalizer;
    else rep.verdict = Verdict::Pass;
    return rep;
}

VerificationReport check_nu_stability(const Transform& fbar, const Transform& gbar,
                                      const Transform& nu_pgf, SystemKind mode,
                                      const std::vector<double>& grid, double tol) {
    if (mode != SystemKind::Max)
        throw std::invalid_argument("check_nu_stability: only max systems are supported");
    if (fbar.kind() != Kind::Survival || gbar.kind() != Kind::Survival)
        throw std::invalid_argument("check_nu_stability: F and G must be given as survival functions");
    if (nu_pgf.kind() != Kind::Pgf)
        throw std::invalid_argument("check_nu_stability: counting law must be a p.g.f.");

    VerificationReport rep;
    rep.system = system_name(mode);
    rep.definition = definition_name(DefinitionKind::Nu);
    rep.distribution_family = fbar.family();
    rep.distribution_params = fbar.params();
    rep.normalizer_id = gbar.family();
    rep.check_kind = kind_name(Kind::Survival);
    rep.tol = tol;

    // For the Sibuya counting law, 1 - Pnu(F) = Fbar^gamma is evaluated on the
    // survival side; the generic path through z = 1 - Fbar loses the tail to
    // rounding once Fbar drops below machine precision.
    const bool sibuya_nu = nu_pgf.family() == "sibuya_pgf";
    const double nu_gamma = sibuya_nu ? nu_pgf.param("gamma") : 0.0;

    NResult res;
    res.n = 1;
    for (double x : grid) {
        res.points.push_back(x);
        try {
            double g = gbar.real_at(x);
            double lhs = 1.0 - fbar.real_at(-std::log(g));     // F(-ln Gbar(x))
            double fb = fbar.real_at(x);
            double rhs = sibuya_nu
                             ? 1.0 - std::pow(fb, nu_gamma)
                             : nu_pgf.real_at(std::min(1.0, std::max(0.0, 1.0 - fb)));
            double r = residual_metric(Complex(lhs, 0), Complex(rhs, 0));
            res.residuals.push_back(r);
            res.point_errors.emplace_back();
            res.worst = std::max(res.worst, r);
        } catch (const std::exception& e) {
            res.residuals.push_back(-1.0);
            res.point_errors.emplace_back(e.what());
        }
    }
    rep.worst_residual = res.worst;
    rep.per_n.push_back(std::move(res));
    rep.verdict = rep.worst_residual <= tol ? Verdict::Pass : Verdict::Fail;
    return rep;
}

PgfValidity check_pgf_validity(const Transform& q, int order) {
    PgfValidity out;
    out.order = order;
    TruncatedSeries s = pgf_series(q, order);
    out.coeffs = s.coeffs();
    out.first_negative = first_negative_index(s);
    out.value_at_one = q.real_at(1.0);
    out.valid = out.first_negative < 0 && std::abs(out.value_at_one - 1.0) <= 1e-9;
    return out;
}

CmDiagnostic check_complete_monotone(const Transform& L, const std::vector<double>& s_points,
                                     int order, double h) {
    if (order > 8) throw std::invalid_argument("check_complete_monotone: order must be <= 8");
    if (!(h > 0)) throw std::invalid_argument("check_complete_monotone: spacing must be positive");
    CmDiagnostic out;
    std::vector<double> binom(static_cast<size_t>(order) + 1);
    for (double s : s_points) {
        if (!L.domain().contains(s) || !L.domain().contains(s + order * h)) continue;
        std::vector<double> vals(static_cast<size_t>(order) + 1);
        for (int j = 0; j <= order; ++j) vals[static_cast<size_t>(j)] = L.real_at(s + j * h);
        for (int k = 1; k <= order; ++k) {
            // Delta^k L(s) via the alternating binomial sum.
            binom[0] = 1.0;
            for (int j = 1; j <= k; ++j) binom[static_cast<size_t>(j)] =
                binom[static_cast<size_t>(j - 1)] * (k - j + 1) / j;
            double d = 0.0;
            for (int j = 0; j <= k; ++j) {
                double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
                d += sign * binom[static_cast<size_t>(j)] * vals[static_cast<size_t>(j)];
            }
            double signed_d = (k % 2 == 0) ? d : -d;
            if (signed_d < -1e-12) {
                if (out.pass || signed_d < out.worst_violation) {
                    out.fail_order = out.pass ? k : out.fail_order;
                    out.fail_point = out.pass ? s : out.fail_point;
                }
                out.worst_violation = std::min(out.worst_violation, signed_d);
                if (out.pass) {
                    out.pass = false;
                    out.fail_order = k;
                    out.fail_point = s;
                }
            }
        }
    }
    return out;
}

CmDiagnostic check_complete_monotone(const Transform& L, int order) {
    return check_complete_monotone(L, linspace(0.0, 2.0, 41), order, 0.05);
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int m) {
    // Cyclic Jacobi; a is row-major m x m and gets destroyed.
    auto A = [&a, m](int i, int j) -> double& { return a[static_cast<size_t>(i) * m + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) off += A(i, j) * A(i, j);
        if (off < 1e-26 * m * m) break;
        for (int p = 0; p < m; ++p) {
            for (int q = p + 1; q < m; ++q) {
                double apq = A(p, q);
                if (std::abs(apq) < 1e-300) continue;
                double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < m; ++k) {
                    double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < m; ++k) {
                    double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) eig[static_cast<size_t>(i)] = A(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

PosDefDiagnostic check_positive_definite(const Transform& g, const std::vector<double>& t_points) {
    const int m = static_cast<int>(t_points.size());
    if (m < 2 || m > 64)
        throw std::invalid_argument("check_positive_definite: need between 2 and 64 points");
    std::vector<Complex> G(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            G[static_cast<size_t>(i) * m + j] = g(t_points[static_cast<size_t>(i)] -
                                                  t_points[static_cast<size_t>(j)]);
    // Hermitianize, then embed A + iB as [[A, -B], [B, A]] (eigenvalues doubled).
    const int M = 2 * m;
    std::vector<double> R(static_cast<size_t>(M) * M, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            Complex h = 0.5 * (G[static_cast<size_t>(i) * m + j] +
                               std::conj(G[static_cast<size_t>(j) * m + i]));
            R[static_cast<size_t>(i) * M + j] = h.real();
            R[static_cast<size_t>(i) * M + (m + j)] = -h.imag();
            R[static_cast<size_t>(m + i) * M + j] = h.imag();
            R[static_cast<size_t>(m + i) * M + (m + j)] = h.real();
        }
    }
    std::vector<double> eig = symmetric_eigenvalues(std::move(R), M);
    PosDefDiagnostic out;
    out.min_eigenvalue = eig.front();
    out.pass = out.min_eigenvalue >= -1e-8;
    return out;
}

InfDivDiagnostic check_infdiv_necessary(const Transform& t, const std::vector<double>& grid) {
    InfDivDiagnostic out;
    if (t.kind() == Kind::Chf) {
        std::vector<double> pts = grid;
        if (pts.empty()) {
            DistributionSpec dummy;
            pts = default_grid(Kind::Chf, dummy);
        }
        double mn = std::numeric_limits<double>::infinity();
        for (double x : pts) mn = std::min(mn, std::abs(t(x)));
        out.value = mn;
        out.check = "ch.f. nonvanishing on grid";
        out.necessary_pass = mn > 1e-12;
        return out;
    }
    if (t.kind() == Kind::Pgf) {
        out.value = t.real_at(0.0);
        out.check = "p0 > 0";
        out.necessary_pass = out.value > 1e-15;
        return out;
    }
    throw std::invalid_argument("check_infdiv_necessary: transform must be CHF or PGF");
}

} // namespace cstab
