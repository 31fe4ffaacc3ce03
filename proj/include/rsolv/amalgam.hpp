#pragma once

// Generalized free products of pc factors amalgamating a common subgroup:
// reduced normal forms (head in C times alternating canonical right-coset
// representatives), the word problem, homomorphism extension, the two
// kernel-structure predicates, and doubles with their retraction.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rsolv/pc.hpp"

namespace rsolv {

class Amalgam;
using AmalgamPtr = std::shared_ptr<const Amalgam>;

// Reduced form: head in C, then (factor, coset representative) pairs with
// nonidentity representatives and distinct adjacent factors. Unique given
// the factors' canonical coset representative functions.
struct AmalgamElement {
  AmalgamPtr amal;
  PcElement head;                                   // element of the C group
  std::vector<std::pair<size_t, PcElement>> tail;   // (factor index, rep)

  bool is_identity() const { return head.is_identity() && tail.empty(); }
  size_t syllable_length() const { return tail.size(); }
  bool operator==(const AmalgamElement& o) const {
    return amal == o.amal && head == o.head && tail == o.tail;
  }
  std::string str() const;
};

using Letter = std::pair<size_t, PcElement>;  // (factor index, factor element)

class Amalgam : public std::enable_shared_from_this<Amalgam> {
 public:
  // Factors with verified injective embeddings of a common group C. For two
  // factors this realizes {A * B; C_A = C_B}; for more, a common C.
  static AmalgamPtr build(std::vector<PcGroupPtr> factors, PcGroupPtr c,
                          std::vector<PcHom> embeddings,
                          std::vector<std::string> factor_names = {});

  // Two-factor convenience: C_A = <c_gens_in_a> identified with the subgroup
  // of B generated by the matching images. Checks that the identification is
  // an isomorphism of the two subgroups by echelonizing the relation graph
  // in both directions.
  static AmalgamPtr identify(PcGroupPtr a, const std::vector<PcElement>& c_gens_in_a,
                             PcGroupPtr b, const std::vector<PcElement>& images_in_b,
                             std::vector<std::string> factor_names = {});

  size_t nfactors() const { return factors_.size(); }
  const PcGroupPtr& factor(size_t f) const { return factors_[f]; }
  const std::string& factor_name(size_t f) const { return names_[f]; }
  const PcGroupPtr& c_group() const { return c_; }
  const PcHom& embedding(size_t f) const { return emb_[f]; }
  const PcSubgroup& image_subgroup(size_t f) const { return images_[f]; }

  AmalgamElement identity() const;
  AmalgamElement from_c(const PcElement& c) const;
  AmalgamElement from_factor(size_t f, const PcElement& x) const;
  AmalgamElement normal_form(const std::vector<Letter>& letters) const;
  // Word over the union of the factor generator alphabets.
  AmalgamElement parse(const std::string& text) const;

  AmalgamElement mul(const AmalgamElement& a, const AmalgamElement& b) const;
  AmalgamElement inv(const AmalgamElement& a) const;
  AmalgamElement conj(const AmalgamElement& x, const AmalgamElement& by) const;
  AmalgamElement comm_elems(const AmalgamElement& x, const AmalgamElement& y) const;
  AmalgamElement pow(const AmalgamElement& x, const Int& k) const;

  bool is_trivial(const AmalgamElement& a) const { return a.is_identity(); }
  bool equal(const AmalgamElement& a, const AmalgamElement& b) const;

  // The element as letters (head written in factor 0).
  std::vector<Letter> letters(const AmalgamElement& a) const;

  const std::vector<std::string>& union_alphabet() const { return alphabet_; }

 private:
  Amalgam() = default;
  void mul_letter(AmalgamElement& w, size_t f, const PcElement& x) const;
  void push_carry(AmalgamElement& w, PcElement c) const;

  std::vector<PcGroupPtr> factors_;
  std::vector<std::string> names_;
  PcGroupPtr c_;
  std::vector<PcHom> emb_;
  std::vector<PcSubgroup> images_;          // embedding images
  std::vector<std::shared_ptr<HomGraph>> pre_;  // preimage tables per factor
  std::vector<std::string> alphabet_;       // concatenated factor generator names
  std::vector<std::pair<size_t, size_t>> alphabet_map_;  // alphabet -> (factor, local index)
};

// A homomorphism from an amalgam into a pc group, given by one verified
// per-factor hom; the per-factor homs must agree on C.
class ExtendedHom {
 public:
  ExtendedHom() = default;
  ExtendedHom(AmalgamPtr dom, PcGroupPtr cod, std::vector<PcHom> factor_homs);

  const AmalgamPtr& domain() const { return dom_; }
  const PcGroupPtr& codomain() const { return cod_; }
  const std::vector<PcHom>& factor_homs() const { return homs_; }

  PcElement apply(const AmalgamElement& w) const;

  // Re-runs every verification this hom was built with (Von Dyck per factor
  // relation plus agreement on C); returns false instead of throwing.
  bool reverify() const;

 private:
  AmalgamPtr dom_;
  PcGroupPtr cod_;
  std::vector<PcHom> homs_;
};

// Rank certificate for the kernel-structure predicates: per checked
// subgroup, its Hirsch length and the Hirsch length of its image.
struct RankCertificate {
  std::string label;
  size_t domain_hirsch = 0;
  size_t image_hirsch = 0;
  bool preserved() const { return domain_hirsch == image_hirsch; }
};

struct KernelFacts {
  bool holds = false;
  std::vector<RankCertificate> certificates;
};

// True iff the hom is injective on every factor (Hirsch-length certificate
// per factor); licenses "the kernel is free".
KernelFacts kernel_misses_factors(const ExtendedHom& h);
// True iff the hom is injective on C; licenses "the kernel is a free product
// of conjugates of factor subgroups with a free group".
KernelFacts kernel_misses_amalgam(const ExtendedHom& h);

// A homomorphism between amalgams, given per factor by generator images in
// the target amalgam. Verifies every factor relation and agreement on C.
class AmalgamHom {
 public:
  AmalgamHom() = default;
  AmalgamHom(AmalgamPtr dom, AmalgamPtr cod, std::vector<std::vector<AmalgamElement>> images);

  const AmalgamPtr& domain() const { return dom_; }
  const AmalgamPtr& codomain() const { return cod_; }
  const std::vector<std::vector<AmalgamElement>>& images() const { return images_; }

  AmalgamElement apply(const AmalgamElement& w) const;
  bool reverify() const;

 private:
  AmalgamPtr dom_;
  AmalgamPtr cod_;
  std::vector<std::vector<AmalgamElement>> images_;
};

// A double {A * Aphi; C = Cphi} with its retraction onto the base factor.
struct Double {
  AmalgamPtr amalgam;
  PcHom iso;                // A -> copy
  ExtendedHom retraction;   // psi: amalgam -> A
};

// Double of a over the subgroup c (the copy is a renamed clone).
Double make_double(PcGroupPtr a, const PcSubgroup& c);
// Generalized double: k isomorphic copies amalgamating the common image of c.
Double make_multi_double(PcGroupPtr a, const PcSubgroup& c, size_t k);

}  // namespace rsolv
