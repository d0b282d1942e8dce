#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cstab/normalize.hpp"
#include "cstab/transforms.hpp"

namespace cstab {

enum class Verdict { Pass, Fail, InvalidNormalizer, Unresolved };
const char* verdict_name(Verdict v);

// One stability assertion: a system type, a definition, a distribution, a
// normalizer family, the index range, the evaluation grid and a tolerance.
struct StabilityClaim {
    SystemKind system = SystemKind::Additive;
    DefinitionKind definition = DefinitionKind::Cs;
    DistributionSpec distribution;
    Kind check_kind = Kind::Laplace;       // transform kind the residuals use
    NormalizerFamily normalizers;
    std::vector<int> n_range;
    std::vector<double> grid;
    double tol = 1e-9;
    bool gate_on_validity = true;          // failed screens force INVALID_NORMALIZER
    bool adjudicate_unresolved = false;    // on residual failure, try the solved
                                           // family; emit UNRESOLVED if it fails
                                           // the monotonicity screen
    int cm_order = 4;                      // requested complete-monotonicity order
    std::optional<Transform> nu_pgf;       // counting p.g.f. (NU definition only)
    std::vector<std::string> convention_notes;
};

struct DiagnosticResult {
    std::string name;
    bool pass = true;
    bool gating = false;
    double value = 0.0;
    std::string detail;
};

struct NResult {
    int n = 0;
    std::vector<double> points;
    std::vector<double> residuals;           // -1 marks an evaluation failure
    std::vector<std::string> point_errors;
    double worst = 0.0;
    double cross_residual = 0.0;             // product-c.s. n-th power cross-check
    std::vector<DiagnosticResult> diagnostics;
};

struct VerificationReport {
    std::string system;
    std::string definition;
    std::string distribution_family;
    ParamMap distribution_params;
    std::string normalizer_id;
    std::string check_kind;
    double tol = 0.0;
    std::vector<NResult> per_n;
    double worst_residual = 0.0;
    Verdict verdict = Verdict::Pass;
    std::vector<std::string> notes;
};

// Residual metric: absolute where |rhs| <= 1, relative otherwise.
double residual_metric(Complex lhs, Complex rhs);

// Checks the claim's stability equation on its grid for every n in range:
//   c.s.:     (normalized transform)^n == T, except product systems where the
//             primary form is normalized == T^{1/n} with the n-th power
//             cross-check also recorded;
//   pursuit:  normalized == T^n.
// Evaluation failures are recorded per point, never fatal.
VerificationReport check_stability(const StabilityClaim& claim);

// nu-stability for max systems: residuals of F(-ln Gbar(x)) - Pnu(F(x)) over
// the grid, where F = 1 - Fbar and Pnu is the counting p.g.f.
VerificationReport check_nu_stability(const Transform& fbar, const Transform& gbar,
                                      const Transform& nu_pgf, SystemKind mode,
                                      const std::vector<double>& grid, double tol);

// p.g.f. validity: series coefficients to the given order must be nonnegative
// (up to the rounding allowance) and Q(1) must equal 1 within 1e-9.
struct PgfValidity {
    bool valid = false;
    int first_negative = -1;
    double value_at_one = 0.0;
    int order = 0;
    std::vector<double> coeffs;
};
PgfValidity check_pgf_validity(const Transform& q, int order);

// Necessary-condition screen for Laplace transforms: alternating-sign test of
// forward differences, (-1)^k Delta_h^k L(s) >= -tol for k <= order over the
// grid. A screen, not a proof.
struct CmDiagnostic {
    bool pass = true;
    int fail_order = 0;
    double fail_point = 0.0;
    double worst_violation = 0.0;
};
CmDiagnostic check_complete_monotone(const Transform& L, const std::vector<double>& s_points,
                                     int order, double h);
CmDiagnostic check_complete_monotone(const Transform& L, int order); // default grid, h = 0.05

// Bochner necessary-condition screen: smallest eigenvalue of the Hermitian
// matrix [g(t_i - t_j)] must be >= -1e-8.
struct PosDefDiagnostic {
    bool pass = true;
    double min_eigenvalue = 0.0;
};
PosDefDiagnostic check_positive_definite(const Transform& g, const std::vector<double>& t_points);

// Necessary conditions for infinite divisibility: a ch.f. must not vanish
// (checked on the grid); a discrete law must put mass at zero (p0 > 0).
struct InfDivDiagnostic {
    bool necessary_pass = false;
    double value = 0.0;     // min |f| on the grid, or p0
    std::string check;
};
InfDivDiagnostic check_infdiv_necessary(const Transform& t, const std::vector<double>& grid = {});

// Eigenvalues of a dense real symmetric matrix (cyclic Jacobi); used by the
// Bochner screen and exposed for its test oracle.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int m);

} // namespace cstab
