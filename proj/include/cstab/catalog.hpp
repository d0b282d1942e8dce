#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cstab/verify.hpp"

namespace cstab {

// One registered case: a distribution, a normalizer family, an expected
// verdict, and everything needed to rebuild the claim under parameter
// overrides.
struct CaseSpec {
    std::string id;
    std::string title;
    SystemKind system = SystemKind::Additive;
    DefinitionKind definition = DefinitionKind::Cs;
    Kind check_kind = Kind::Laplace;
    std::string dist_family;
    ParamMap dist_params;
    std::string normalizer_id;
    Provenance provenance = Provenance::Catalog;
    std::vector<std::string> normalizer_copy_keys;  // dist params the family shares
    ParamMap normalizer_extra;
    ParamMap case_params;                           // extras such as the counting index
    std::vector<int> n_range;
    std::string expected;                           // PASS | FAIL | UNRESOLVED | SCAN
    bool gate_on_validity = true;
    bool adjudicate_unresolved = false;
    int cm_order = 4;
    bool mc_supported = false;
    std::vector<std::string> notes;
};

std::vector<std::string> case_ids();
bool is_case_id(const std::string& id);
CaseSpec get_case(const std::string& id);   // case-insensitive; throws on unknown ids

// Fully resolved claim for a case under parameter overrides (distribution
// parameters by name; "tol" adjusts the tolerance).
StabilityClaim claim_for_case(const CaseSpec& spec, const ParamMap& overrides);

// Nonnegativity sweep of the candidate normalizer family of the tempered
// discrete law: expands Q_n to the given order over the (gamma, a, n) grid
// and reports every combination with a genuinely negative coefficient.
struct ScanViolation {
    double gamma = 0.0;
    double a = 0.0;
    int n = 0;
    int index = 0;
    double coeff = 0.0;
};
struct ScanResult {
    int combinations = 0;
    int order = 0;
    std::vector<ScanViolation> violations;
};
ScanResult run_eq14_scan(const std::vector<double>& gammas, const std::vector<double>& as,
                         const std::vector<int>& ns, int order);

// sup over s in [0.1, 10] of |g_n(s; h) - exp(-n^{-1/alpha} s)| for the
// tempered-stable normalizer; the reference family collapses to the degenerate
// scale normalizer as h tends to zero.
double tempered_stable_limit_distance(double alpha, double h, int n);

// Smallest n0 <= max_n such that the Sibuya pursuit normalizer Q_n has clean
// coefficients (to the given order) for every n in [n0, max_n]; 0 if none.
int sibuya_validity_threshold(double gamma, int order, int max_n);

struct CaseReport {
    CaseSpec spec;
    std::vector<VerificationReport> reports;
    std::optional<ScanResult> scan;
    std::vector<std::string> extras;
    std::string verdict;
    bool matches_expected = false;
};

CaseReport run_case(const std::string& id, const ParamMap& overrides = {});

} // namespace cstab
