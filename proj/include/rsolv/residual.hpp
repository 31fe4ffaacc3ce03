#pragma once

// Constructive residual-solvability witnesses: for each positive theorem the
// proof's quotient is built and its kernel-structure facts are certified; the
// counterexample is handled by a derived-series trap certificate. A
// strategy-driven search separates a given element in a solvable quotient.
//
// Negative answers are only ever produced by the trap certificate; search
// exhaustion yields "unknown".

#include <optional>

#include "rsolv/abelianization.hpp"
#include "rsolv/central_product.hpp"
#include "rsolv/completion.hpp"

namespace rsolv {

enum class Strategy { Central, Cyclic, Double, AbelianFactor, FiniteIndex, PolyRS };
std::string strategy_name(Strategy s);

// One stage of a witness chain; exactly one of the three homs is engaged.
struct ChainStage {
  std::string label;
  std::optional<AmalgamHom> to_amalgam;
  std::optional<ExtendedHom> to_pc;
  std::optional<RatExtendedHom> to_completion;
  std::vector<std::string> checks;
};

struct KernelFactRecord {
  size_t stage = 0;
  std::string kind;      // kernel-misses-factors | kernel-misses-amalgam |
                         // kernel-misses-factors-rational | kernel-structure
  std::string licensed;  // the structural deduction this certificate licenses
  std::vector<RankCertificate> certificates;
  std::vector<RationalRankCertificate> rational_certificates;
};

struct WitnessImage {
  bool nonidentity = false;
  std::string description;
};

struct SolvabilityWitness {
  Strategy strategy = Strategy::Central;
  AmalgamPtr amalgam;
  std::vector<ChainStage> stages;
  std::vector<KernelFactRecord> kernel_facts;
  std::string conclusion;
  int solvable_derived_length = 0;  // of the final solvable quotient

  // Image of an element through the whole chain.
  WitnessImage map(const AmalgamElement& w) const;
  // Re-runs every hom verification and every kernel-fact certificate.
  bool reverify() const;
};

// Cyclic amalgamated subgroup, C = gp(a) = gp(b). Quotients both factors
// by the highest upper-central term not containing the generator, forms the
// central product D of the quotients amalgamating the images, and certifies
// that the kernel of G -> D misses C.
SolvabilityWitness cyclic_witness(const AmalgamPtr& g, const PcElement& a, const PcElement& b);

// C central in every factor. Builds the
// generalized central product S and certifies that the kernel of G -> S
// misses every factor.
SolvabilityWitness central_witness(const AmalgamPtr& g);

// Doubles: the retraction onto the base factor
// misses every factor.
SolvabilityWitness double_witness(const Double& d);

// One abelian torsion-free factor A; C is a direct factor
// of A1 = C x H of finite index; the quotient G -> A/A1 is finite abelian
// and the kernel structure is recorded.
SolvabilityWitness abelian_factor_witness(const AmalgamPtr& g);

// Both factors of class <= 2, [A : C] finite; extends the
// embedding through the rational Mal'cev completion of the other factor and
// certifies that the kernel misses both factors.
SolvabilityWitness finite_index_witness(const AmalgamPtr& g);

// Filtration compatibility: xi_i(A) cap C_A corresponds to
// xi_i(B) cap C_B under the identification, for every i up to the class.
struct PolyRsLayer {
  int layer = 0;
  bool compatible = false;
  std::string detail;
};
struct PolyRsReport {
  bool compatible = true;
  int failing_layer = -1;
  std::vector<PolyRsLayer> layers;
};
PolyRsReport polyrs_compatibility(const AmalgamPtr& g);

// Compatible-filtration tower: one verified stage per central layer, ending in
// an amalgam of abelian factors handled by the central-product base case.
SolvabilityWitness polyrs_tower(const AmalgamPtr& g);

// Derived-series trap: verifies element^w = [element^u, element^v] in the
// amalgam; a verified certificate licenses membership of the element in
// every derived term, hence non-residual-solvability (and, via the perfect
// normal closure, non-poly-residual-solvability).
struct TrapCertificate {
  AmalgamPtr amalgam;
  std::string element, w, u, v;
  bool verified = false;
  bool degenerate = false;      // the element is the identity
  std::string orientation;      // "as-stated" (u^v = v^-1 u v) or "inverted"
  std::string lhs_nf, rhs_nf;   // reduced forms on failure
  std::string license;
};
TrapCertificate trap_certificate(const AmalgamPtr& g, const std::string& element,
                                 const std::string& w, const std::string& u,
                                 const std::string& v);

struct AmalgamTarget {
  AmalgamPtr amalgam;
  std::optional<Double> double_info;
};

struct SeparateOutcome {
  std::optional<SolvabilityWitness> witness;
  std::vector<std::string> notes;  // one per strategy tried
  bool separated() const { return witness.has_value(); }
};
// Tries the strategies in the fixed order central, cyclic, double,
// abelian-factor, finite-index, poly-rs; returns the first witness whose
// chain maps the word to a nonidentity element of its solvable quotient.
SeparateOutcome separate(const AmalgamTarget& t, const std::string& word,
                         int max_derived_length, bool deterministic = true);

// Determines the sign eps with (a^{x^i})^2 = a^2 b^{eps i} for all i in
// [-range, range], checked by the amalgam word problem.
struct SignCheck {
  bool consistent = false;
  int epsilon = 0;
  std::vector<std::string> details;
};
SignCheck squared_conjugation_sign_check(const AmalgamPtr& g, const std::string& a,
                                         const std::string& x, const std::string& b, int range);

// The conjugation/commutator conventions this artifact fixes, recorded in
// every emitted certificate.
inline const char* kCommutatorConvention = "[u,v] = u^-1*v^-1*u*v";
inline const char* kConjugationConvention = "u^v = v^-1*u*v";

}  // namespace rsolv
