#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cstab/catalog.hpp"
#include "cstab/verify.hpp"

using namespace cstab;

namespace {

StabilityClaim gamma_cs_claim() {
    StabilityClaim c;
    c.system = SystemKind::Additive;
    c.definition = DefinitionKind::Cs;
    c.distribution = make_distribution("gamma", {{"b", 1.0}, {"gamma", 2.0}});
    c.check_kind = Kind::Laplace;
    c.normalizers = make_normalizer_family("gamma_reference", {{"b", 1.0}});
    c.n_range = {2, 3, 4, 5, 6, 7, 8};
    c.grid = default_grid(Kind::Laplace, c.distribution);
    return c;
}

} // namespace

TEST_CASE("residual metric switches to relative above 1") {
    CHECK(residual_metric(Complex(0.5, 0), Complex(0.6, 0)) == doctest::Approx(0.1));
    CHECK(residual_metric(Complex(11.0, 0), Complex(10.0, 0)) == doctest::Approx(0.1));
}

TEST_CASE("gamma law satisfies its c.s. claim") {
    VerificationReport rep = check_stability(gamma_cs_claim());
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.worst_residual <= 1e-10);
}

TEST_CASE("claim validation") {
    StabilityClaim c = gamma_cs_claim();
    c.grid.clear();
    CHECK_THROWS_AS(check_stability(c), std::invalid_argument);
    c = gamma_cs_claim();
    c.tol = 0.0;
    CHECK_THROWS_AS(check_stability(c), std::invalid_argument);
}

TEST_CASE("weibull min-c.s. claim passes") {
    StabilityClaim c;
    c.system = SystemKind::Min;
    c.definition = DefinitionKind::Cs;
    c.distribution = make_distribution("weibull", {{"alpha", 2.0}, {"beta", 1.0}});
    c.check_kind = Kind::Survival;
    c.normalizers = make_normalizer_family("min_exp_rate", {{"alpha", 2.0}, {"sign", -1.0}});
    c.n_range = {1, 2, 3, 4, 5, 6, 7, 8};
    c.grid = default_grid(Kind::Survival, c.distribution);
    VerificationReport rep = check_stability(c);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.worst_residual <= 1e-10);
}

TEST_CASE("a wrong normalizer fails the claim") {
    StabilityClaim c = gamma_cs_claim();
    // wrong rate: degenerate scale family solves a different law
    c.normalizers = make_normalizer_family("stable_scale", {{"alpha", 0.5}});
    c.n_range = {2};
    VerificationReport rep = check_stability(c);
    CHECK(rep.verdict == Verdict::Fail);
    CHECK(rep.worst_residual > 1e-2);
}

TEST_CASE("disputed pursuit claim yields UNRESOLVED with both evidence notes") {
    StabilityClaim c;
    c.system = SystemKind::Product;
    c.definition = DefinitionKind::Pursuit;
    c.distribution = make_distribution("pareto", {{"alpha", 0.25}});
    c.check_kind = Kind::Chf;
    c.normalizers = make_normalizer_family("pareto_chf_reference", {{"alpha", 0.25}});
    c.n_range = {2};
    c.grid = default_grid(Kind::Chf, c.distribution);
    c.gate_on_validity = false;
    c.adjudicate_unresolved = true;
    c.cm_order = 2;
    VerificationReport rep = check_stability(c);
    CHECK(rep.verdict == Verdict::Unresolved);
    CHECK(rep.worst_residual > 1e-2);
    bool saw_residual_note = false, saw_screen_note = false;
    for (const auto& note : rep.notes) {
        if (note.find("reference normalizer residual") != std::string::npos) saw_residual_note = true;
        if (note.find("complete-monotonicity") != std::string::npos) saw_screen_note = true;
    }
    CHECK(saw_residual_note);
    CHECK(saw_screen_note);
}

TEST_CASE("reference pursuit normalizer residual is large at t=1, n=2") {
    // direct evaluation under the documented convention
    double alpha = 0.25;
    Complex lng = alpha * (std::pow(Complex(1.0, 1.0 / alpha), 2) - 1.0);
    Complex ftilde = alpha / (alpha - lng);
    Complex f1 = alpha / Complex(alpha, -1.0);
    CHECK(std::abs(ftilde - f1 * f1) > 1e-2);
}

TEST_CASE("nu-stability of the max system") {
    auto fbar = make_transform("weibull_survival", {{"alpha", 2.0}, {"beta", 1.0}});
    auto nu = make_transform("sibuya_pgf", {{"gamma", 0.25}});
    std::vector<double> grid = logspace(-2.0, 1.0, 30);

    // matched rate a = nu_alpha^{1/b} = 0.5
    auto good = make_transform("min_exp_survival", {{"rate", 0.5}});
    VerificationReport ok = check_nu_stability(fbar, good, nu, SystemKind::Max, grid, 1e-12);
    CHECK(ok.verdict == Verdict::Pass);
    CHECK(ok.worst_residual <= 1e-12);

    // nu_alpha = 1 with the unit rate is the identity
    auto nu1 = make_transform("sibuya_pgf", {{"gamma", 0.999999999}});
    auto unit = make_transform("min_exp_survival", {{"rate", 1.0}});
    VerificationReport id = check_nu_stability(fbar, unit, nu1, SystemKind::Max, grid, 1e-6);
    CHECK(id.verdict == Verdict::Pass);

    // wrong exponent: a = nu_alpha fails visibly at x = 1
    auto bad = make_transform("min_exp_survival", {{"rate", 0.25}});
    VerificationReport no = check_nu_stability(fbar, bad, nu, SystemKind::Max, {1.0}, 1e-9);
    CHECK(no.verdict == Verdict::Fail);
    CHECK(no.worst_residual > 1e-2);

    CHECK_THROWS_AS(check_nu_stability(fbar, good, nu, SystemKind::Min, grid, 1e-9),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_nu_stability(fbar, good, fbar, SystemKind::Max, grid, 1e-9),
                    std::invalid_argument);
}

TEST_CASE("p.g.f. validity verdicts") {
    auto q = make_transform("tempered_discrete_q_pgf", {{"a", 0.75}, {"gamma", 0.5}, {"n", 2.0}});
    PgfValidity v = check_pgf_validity(q, 64);
    CHECK(v.valid);
    CHECK(v.coeffs[0] == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
    CHECK(v.coeffs[1] == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
    CHECK(v.coeffs[2] == doctest::Approx(3.0 / 128.0).epsilon(1e-12));

    PgfValidity idv = check_pgf_validity(make_transform("unit_pgf", {}), 16);
    CHECK(idv.valid);
    CHECK(idv.coeffs[0] == doctest::Approx(0.0));
    CHECK(idv.coeffs[1] == doctest::Approx(1.0));

    auto sq = make_transform("sibuya_q_pgf", {{"gamma", 0.5}, {"n", 2.0}});
    PgfValidity sv = check_pgf_validity(sq, 64);
    CHECK(sv.valid);
    CHECK(sv.coeffs[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sv.coeffs[3] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("complete monotonicity screen") {
    CmDiagnostic unit = check_complete_monotone(make_transform("unit_laplace", {}), 8);
    CHECK(unit.pass);

    CmDiagnostic g2 = check_complete_monotone(
        make_transform("gamma_g_laplace", {{"b", 1.0}, {"n", 2.0}}), 8);
    CHECK(g2.pass);

    // the pursuit solution for the Mellin family exp(alpha(1-(1+s/alpha)^n)):
    // at alpha = 1/4 the second difference already changes sign at s = 0
    auto solved_small = solve_normalizer(make_transform("pareto_mellin", {{"alpha", 0.25}}),
                                         DefinitionKind::Pursuit, 2);
    CmDiagnostic cm2 = check_complete_monotone(solved_small, 2);
    CHECK_FALSE(cm2.pass);
    CHECK(cm2.fail_order == 2);

    // at alpha = 1 the order-2 differences stay positive and the screen only
    // catches the family at order 3
    auto solved_one = solve_normalizer(make_transform("pareto_mellin", {{"alpha", 1.0}}),
                                       DefinitionKind::Pursuit, 2);
    CHECK(check_complete_monotone(solved_one, 2).pass);
    CmDiagnostic cm3 = check_complete_monotone(solved_one, 3);
    CHECK_FALSE(cm3.pass);
    CHECK(cm3.fail_order == 3);

    CHECK_THROWS_AS(check_complete_monotone(solved_one, 9), std::invalid_argument);
}

TEST_CASE("solved pursuit normalizer has the advertised exponent form") {
    // ln g_2(s) = -2s - s^2/alpha for the reciprocal-linear Mellin family
    for (double alpha : {0.25, 1.0}) {
        auto solved = solve_normalizer(make_transform("pareto_mellin", {{"alpha", alpha}}),
                                       DefinitionKind::Pursuit, 2);
        for (double s : {0.1, 0.5, 1.0})
            CHECK(solved.log_at(s).real() ==
                  doctest::Approx(-2.0 * s - s * s / alpha).epsilon(1e-9));
    }
}

TEST_CASE("positive definiteness screen") {
    // rank-one matrix from the degenerate ch.f.: eigenvalues {m, 0, ..., 0}
    PosDefDiagnostic unit =
        check_positive_definite(make_transform("unit_chf", {}), {0.0, 0.5, -0.5, 1.0, -1.0});
    CHECK(unit.pass);
    CHECK(std::abs(unit.min_eigenvalue) <= 1e-10);

    PosDefDiagnostic g2 = check_positive_definite(
        make_transform("laplace_g_chf", {{"a", 1.0}, {"n", 2.0}}),
        {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0});
    CHECK(g2.pass);

    Transform bogus(Kind::Chf, "one_plus_t2", {}, all_reals(),
                    [](double t) { return Complex(1.0 + t * t, 0); });
    PosDefDiagnostic bad = check_positive_definite(bogus, {0.0, 1.0, 2.0});
    CHECK_FALSE(bad.pass);
    CHECK(bad.min_eigenvalue == doctest::Approx(-4.0).epsilon(1e-8));

    CHECK_THROWS_AS(check_positive_definite(bogus, {0.0}), std::invalid_argument);
}

TEST_CASE("jacobi eigenvalues against a hand-checked matrix") {
    // [[2,1],[1,2]] has eigenvalues 1 and 3
    std::vector<double> eig = symmetric_eigenvalues({2, 1, 1, 2}, 2);
    CHECK(eig[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("infinite divisibility necessary conditions") {
    auto fp = make_transform("srw_passage_pgf", {{"m", 1.0}});
    InfDivDiagnostic d = check_infdiv_necessary(fp);
    CHECK_FALSE(d.necessary_pass);
    CHECK(d.value == doctest::Approx(0.0));

    auto td = make_transform("tempered_discrete_pgf", {{"lambda", 1.0}, {"a", 0.5}, {"gamma", 0.5}});
    InfDivDiagnostic ok = check_infdiv_necessary(td);
    CHECK(ok.necessary_pass);
    CHECK(ok.value == doctest::Approx(std::exp(-(1.0 - std::sqrt(0.5)))).epsilon(1e-12));

    InfDivDiagnostic unit = check_infdiv_necessary(make_transform("unit_chf", {}));
    CHECK(unit.necessary_pass);
    CHECK(unit.value == doctest::Approx(1.0));

    CHECK_THROWS_AS(check_infdiv_necessary(make_transform("unit_laplace", {})),
                    std::invalid_argument);
}

TEST_CASE("evaluation failures are recorded per point, not fatal") {
    StabilityClaim c;
    c.system = SystemKind::Product;
    c.definition = DefinitionKind::Pursuit;
    c.distribution = make_distribution("log_levy", {});
    c.check_kind = Kind::Mellin;
    c.normalizers = make_normalizer_family("power_scale", {{"exponent", 2.0}});
    c.n_range = {2};
    c.grid = {-2.0, -1.0, 0.5};   // 0.5 lies outside the transform's domain
    VerificationReport rep = check_stability(c);
    REQUIRE(rep.per_n.size() == 1);
    const auto& nr = rep.per_n.front();
    CHECK(nr.point_errors[0].empty());
    CHECK(nr.point_errors[1].empty());
    CHECK_FALSE(nr.point_errors[2].empty());
    CHECK(nr.residuals[2] == -1.0);
    CHECK(rep.verdict == Verdict::Pass);   // the computable points decide
    bool note = false;
    for (const auto& s : rep.notes)
        if (s.find("evaluation failures") != std::string::npos) note = true;
    CHECK(note);
}

TEST_CASE("verdicts are stable under grid refinement") {
    StabilityClaim c = gamma_cs_claim();
    VerificationReport coarse = check_stability(c);
    c.grid = logspace(-2.0, 1.3, 60);
    VerificationReport fine = check_stability(c);
    CHECK(coarse.verdict == Verdict::Pass);
    CHECK(fine.verdict == Verdict::Pass);
    CHECK(fine.worst_residual <= 1e-10);
}

TEST_CASE("gating distinguishes INVALID_NORMALIZER from FAIL") {
    // The identity holds for the reference pair, but a deliberately corrupted
    // "normalizer" with a negative coefficient trips the p.g.f. gate.
    StabilityClaim c;
    c.system = SystemKind::Additive;
    c.definition = DefinitionKind::Pursuit;
    c.distribution = make_distribution("sibuya", {{"gamma", 0.7}});
    c.check_kind = Kind::Pgf;
    c.normalizers = make_normalizer_family("sibuya_reference", {{"gamma", 0.7}});
    c.n_range = {2};
    c.grid = default_grid(Kind::Pgf, c.distribution);
    VerificationReport rep = check_stability(c);
    // identity is algebraically exact, so only the gate decides the verdict
    CHECK(rep.worst_residual <= 1e-12);
    bool gate_failed = false;
    for (const auto& nr : rep.per_n)
        for (const auto& d : nr.diagnostics)
            if (d.gating && !d.pass) gate_failed = true;
    if (gate_failed) CHECK(rep.verdict == Verdict::InvalidNormalizer);
    else CHECK(rep.verdict == Verdict::Pass);
}
