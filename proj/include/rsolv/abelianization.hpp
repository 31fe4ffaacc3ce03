#pragma once

// Abelianization of pc groups and amalgams, handled entirely as integer
// matrices: invariant factors via SNF, the epimorphism onto
// D = A_ab/<c alpha> x B_ab/<c beta>, and the perfectness / infiniteness
// predicates.

#include "rsolv/amalgam.hpp"
#include "rsolv/pc.hpp"
#include "rsolv/zmatrix.hpp"

namespace rsolv {

struct AbelianizationResult {
  AbelianGroup group;
  std::vector<std::string> gen_names;              // source generators
  std::vector<std::vector<Int>> generator_images;  // invariant-factor coords
  std::vector<Int> moduli;                         // per coordinate; 0 = free
};

// Relation matrix of a pc presentation read additively: one row per
// nontrivial conjugation tail, one row e_i * u_i - tail per power relation.
IntMatrix pc_relation_matrix(const PcGroup& g);

// Stacked matrix of an amalgam: factor relation blocks plus identification
// rows emb_i(c) - emb_{i+1}(c) over the generators of C.
IntMatrix amalgam_relation_matrix(const Amalgam& g);

AbelianizationResult abelianize_pc(const PcGroupPtr& g);
AbelianizationResult abelianize_amalgam(const AmalgamPtr& g);

// The epimorphism theta : G_ab -> D = A_ab/<c alpha> x B_ab/<c beta^-1>,
// built by two routes: the quotient-based one (two separate cokernels) and
// the presentation-based one (a single stacked cokernel). Both must agree.
struct QuotientD {
  AbelianGroup d;                  // quotient route
  AbelianGroup d_presentation;     // presentation route
  std::vector<std::vector<Int>> theta_images;  // per union generator, D-coords
  std::vector<Int> moduli;
  bool relations_die = false;      // every relation of G_ab maps to zero
  bool images_generate = false;    // the generator images generate D
  bool routes_agree = false;
  bool verified() const { return relations_die && images_generate && routes_agree; }
};
QuotientD quotient_D(const AmalgamPtr& g);  // two-factor amalgams

// True iff the abelianization of the amalgam is trivial.
bool is_perfect(const AmalgamPtr& g);

// True iff A / gp(C, [A,A]) is nontrivial. Requires C proper in A.
bool frattini_consequence_check(const PcGroupPtr& a, const PcSubgroup& c);

// True iff the abelianization has positive free rank.
bool abelianization_infinite(const AmalgamPtr& g);

// The abelianization as a verified hom onto an abelian pc group in
// invariant-factor form.
struct AbelianizationHom {
  AbelianGroup group;
  PcGroupPtr codomain;
  ExtendedHom hom;
};
AbelianizationHom abelianization_hom(const AmalgamPtr& g);

}  // namespace rsolv
