#pragma once

#include <functional>
#include <string>

#include "cstab/transforms.hpp"

namespace cstab {

enum class DefinitionKind { Cs, Pursuit, Nu };
enum class SystemKind { Additive, Product, Min, Max };

const char* definition_name(DefinitionKind d);
const char* system_name(SystemKind s);

enum class Provenance { Catalog, EquationSolved, Degenerate };

// An indexed family n -> g_n (or Q_n, N_n, Gbar_n) of transforms of one kind.
// Validity of a member is a reported verdict, not a construction invariant:
// candidate families that fail the screens must still be representable.
struct NormalizerFamily {
    Kind kind;
    std::string id;
    Provenance provenance;
    bool closed_form = true;
    std::function<Transform(int)> member;
};

// g-normalization of a one-sided transform:
//   LAPLACE with LAPLACE normalizer: Ltilde(s) = L(-ln g(s));
//   PGF with PGF normalizer:          Ptilde(z) = P(Q(z)).
// The degenerate normalizer (e^{-s} resp. z) returns the input pointwise.
Transform normalize_onesided(const Transform& T, const Transform& g);

// Normalization of a ch.f. on the whole line through its analytic one-sided
// split: ftilde(t) = plus(ln g(t)) + minus(ln g(-t)).
Transform normalize_twosided_chf(const ChfComponents& f, const Transform& g);

// Mellin normalization Mtilde(u) = M1(-ln N(-u)) + M2(ln N(u)); one-sided
// laws (M1 == 0) reduce to M(ln N(u)).
Transform normalize_mellin_twosided(const MellinComponents& m, const Transform& N);

// Min-system normalization Ftilde(x) = Fbar(-ln Gbar(x)). Where Gbar hits 0
// the value is taken as the x -> inf limit of Fbar (0 for every catalog law).
Transform normalize_min(const Transform& fbar, const Transform& gbar);

// P(Q(z)) for p.g.f. pairs (alias of the one-sided operator). The composed
// series is exposed separately through pgf_apply_series for the oracle
// cross-check.
Transform normalize_pgf(const Transform& P, const Transform& Q);

// Numeric inversion of a strictly monotone real function by bisection, with
// the bracket grown geometrically from the unit point. Relative tolerance
// 1e-12 on the argument.
double invert_monotone(const std::function<double(double)>& f, double target, double lo_hint,
                       double hi_hint, bool increasing);

// Solves the stability equation for the normalizer pointwise. For a c.s.
// definition the target is T^{1/index}, for pursuit T^{index}:
//   LAPLACE:  g(s) = exp{-L^{-1}(L(s)^power)}
//   PGF:      Q(z) = P^{-1}(P(z)^power)
//   SURVIVAL: Gbar(x) = exp{-Fbar^{-1}(Fbar(x)^power)}
//   MELLIN:   returned on the log scale as the LAPLACE-kind transform
//             N(-s) = exp{M^{-1}(M(-s)^power)}.
// A registered closed-form inverse is used when present, else bisection.
// The index may be fractional (used by the pursuit/c.s. index duality).
Transform solve_normalizer(const Transform& T, DefinitionKind definition, double index);

// Built-in normalizer family registry. Ids and their parameters:
//   degenerate              (kind encoded by param "kind" 0..4: CHF..SURVIVAL)
//   stable_scale            alpha          g_n(s) = exp(-n^{-1/alpha} s)
//   tempered_stable_reference alpha, h
//   laplace_reference         a
//   gamma_reference           b
//   geometric_reference       p
//   tempered_discrete_reference a, gamma
//   sibuya_reference          gamma
//   chebyshev               (none)
//   power_scale             exponent       N_n(u) = exp(n^{exponent} u)
//   double_pareto_unnormalized_n a
//   double_pareto_matched   a
//   pareto_chf_reference      alpha
//   min_exp_rate            alpha, sign    Gbar_n(x) = exp(-n^{sign/alpha} x)
//   gm_reference              lambda
//   pareto_min              sign           Gbar_n(x) = exp(-x^{n^sign})
NormalizerFamily make_normalizer_family(const std::string& id, const ParamMap& params);

// Family of equation-solved normalizers for a given transform.
NormalizerFamily solved_normalizer_family(const Transform& T, DefinitionKind definition);

} // namespace cstab
