#pragma once

// Finitely generated nilpotent groups as consistent polycyclic presentations:
// collection to normal form, the word problem, subgroups via induced
// (echelonized) generating sequences, central/derived series, quotients,
// direct products, and verified homomorphisms.
//
// A presentation has generators g_1..g_n, a relative order per generator
// (0 = infinite), conjugation tails t_ji = [g_j, g_i] for i < j supported on
// generators of index > i, and power tails g_i^{e_i} for finite e_i supported
// on index > i. Consistency is checked exhaustively at build time by the
// associativity and power overlap tests.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rsolv/word.hpp"
#include "rsolv/zmatrix.hpp"

namespace rsolv {

class PcGroup;
using PcGroupPtr = std::shared_ptr<const PcGroup>;

class PcElement {
 public:
  PcElement() = default;
  PcElement(PcGroupPtr g, std::vector<Int> exps);

  const PcGroupPtr& group() const { return g_; }
  const std::vector<Int>& exps() const { return e_; }
  bool is_identity() const;
  // Index of the first nonzero exponent, or -1 for the identity.
  int leader() const;
  const Int& lead_exp() const;

  PcElement mul(const PcElement& o) const;
  PcElement inv() const;
  PcElement pow(const Int& k) const;
  // this^o = o^-1 * this * o
  PcElement conj(const PcElement& o) const;

  bool operator==(const PcElement& o) const;
  std::string str() const;

 private:
  PcGroupPtr g_;
  std::vector<Int> e_;
};

PcElement comm(const PcElement& x, const PcElement& y);  // [x,y] = x^-1 y^-1 x y

// Raw presentation data for the builder. Tails are exponent vectors of
// length ngens (interpreted as normal-form words, ascending index).
struct PcData {
  std::vector<std::string> names;
  std::vector<Int> orders;                              // 0 = infinite
  std::vector<std::vector<std::vector<Int>>> conj_tail; // [j][i], i < j
  std::vector<std::vector<Int>> power_tail;             // [i], finite orders only
  std::optional<int> declared_class;
};

class PcGroup : public std::enable_shared_from_this<PcGroup> {
 public:
  // Builds and checks a pc group: structural validation, nilpotent weight
  // assignment, inverse-conjugation tables, exhaustive overlap tests.
  // Throws ConsistencyError naming the first failing overlap.
  static PcGroupPtr build(PcData data);
  // Derives the pc data from a presentation whose relations are commutator
  // equations [u,v] = tail (single-generator u, v) or power equations
  // g^e = tail; unmentioned generator pairs commute.
  static PcGroupPtr build(const Presentation& p);

  size_t ngens() const { return d_.names.size(); }
  const std::vector<std::string>& names() const { return d_.names; }
  const std::string& name(size_t i) const { return d_.names[i]; }
  const Int& order(size_t i) const { return d_.orders[i]; }
  bool is_torsion_free() const;
  size_t hirsch_length() const;  // number of infinite-order generators
  int nilpotency_class_bound() const { return class_; }  // from the weight fit
  const std::vector<int>& weights() const { return weights_; }
  const std::vector<std::vector<Int>>& conj_tails(size_t j) const { return d_.conj_tail[j]; }
  const std::vector<Int>& power_tail(size_t i) const { return d_.power_tail[i]; }

  PcElement identity() const;
  PcElement gen(size_t i) const;
  PcElement element(std::vector<Int> exps) const;  // collects into normal form
  PcElement collect_word(const Word& w) const;
  PcElement parse(const std::string& text) const;

  std::string element_str(const PcElement& x) const;
  Presentation presentation() const;  // pc relations as a Presentation

  // Collection to normal form from an arbitrary syllable sequence.
  std::vector<Int> collect(const std::vector<Syllable>& raw) const;

  // A renamed structural copy (for doubles and products); same pc data.
  PcGroupPtr renamed_copy(const std::string& suffix) const;

 private:
  PcGroup() = default;
  void validate_structure() const;
  void assign_weights();
  void compute_inverse_conj();
  void check_overlaps() const;

  std::vector<Int> mul_vec(const std::vector<Int>& a, const std::vector<Int>& b) const;
  std::vector<Int> inv_vec(const std::vector<Int>& a) const;
  std::vector<Int> pow_vec(const std::vector<Int>& a, Int k) const;
  std::vector<Int> conj_by_gen(const std::vector<Int>& a, size_t i, int sign) const;
  // Normal form of g_j^{g_i^a} (i < j). For class <= 4 this is the exact
  // binomial formula over the iterated commutators with g_i.
  std::vector<Int> conj_pow_gen(size_t j, size_t i, const Int& a) const;

  PcData d_;
  int class_ = 1;
  std::vector<int> weights_;
  // cpos_[j][i] = normal form of g_j^{g_i}; cneg_[j][i] = g_j^{g_i^{-1}}.
  std::vector<std::vector<std::vector<Int>>> cpos_, cneg_;

  friend class PcElement;
};

// A subgroup given by an induced (echelonized) polycyclic generating
// sequence: strictly increasing leading indices, positive leading exponents
// dividing the layer order, entries above a leader reduced modulo it.
class PcSubgroup {
 public:
  PcSubgroup() = default;

  // Echelonizes the given generators; with normal_closure also closes under
  // conjugation by the ambient generators.
  static PcSubgroup generated(PcGroupPtr g, const std::vector<PcElement>& gens,
                              bool normal_closure = false);

  const PcGroupPtr& ambient() const { return g_; }
  const std::vector<PcElement>& igs() const { return seq_; }
  size_t length() const { return seq_.size(); }
  size_t hirsch_length() const;
  bool is_trivial() const { return seq_.empty(); }

  bool contains(const PcElement& x) const;
  // Exponents of x over the induced sequence (ascending), if a member.
  std::optional<std::vector<Int>> membership(const PcElement& x) const;
  // Canonical representative of the right coset (this)*x.
  PcElement coset_rep(const PcElement& x) const;

  bool is_normal() const;
  bool contains_subgroup(const PcSubgroup& o) const;
  bool same_subgroup(const PcSubgroup& o) const;
  PcSubgroup join(const PcSubgroup& o) const;
  // [A : this], or 0 if the index is infinite.
  Int index_in_ambient() const;

  // The subgroup as an abstract pc group plus the verified inclusion.
  struct AsGroup;
  AsGroup as_group() const;

 private:
  PcGroupPtr g_;
  std::vector<PcElement> seq_;
  friend PcSubgroup igs_build(PcGroupPtr, std::vector<PcElement>, bool);
};

class PcHom {
 public:
  PcHom() = default;
  // Verifies that each defining relation of the domain maps to a relation of
  // the codomain (Von Dyck); throws PreconditionError naming the relation.
  PcHom(PcGroupPtr domain, PcGroupPtr codomain, std::vector<PcElement> images);

  const PcGroupPtr& domain() const { return dom_; }
  const PcGroupPtr& codomain() const { return cod_; }
  const std::vector<PcElement>& images() const { return images_; }

  PcElement apply(const PcElement& x) const;
  PcHom compose(const PcHom& then) const;  // x -> then(this(x))

  PcSubgroup image() const;
  PcSubgroup kernel() const;
  bool is_injective() const { return kernel().is_trivial(); }
  // (domain Hirsch length, image Hirsch length); equality certifies
  // injectivity for torsion-free domains.
  std::pair<size_t, size_t> hirsch_certificate() const;

  static PcHom identity(PcGroupPtr g);

 private:
  PcGroupPtr dom_, cod_;
  std::vector<PcElement> images_;
};

struct PcSubgroup::AsGroup {
  PcGroupPtr group;
  PcHom inclusion;  // group -> ambient, generator s -> igs()[s]
};

enum class SeriesKind { LowerCentral, UpperCentral, Derived };

struct SeriesChain {
  SeriesKind kind;
  // LowerCentral: G = term[0] > term[1] > ... > 1 (last term trivial).
  // Derived: same shape. UpperCentral: 1 = term[0] < ... < term[k] = G.
  std::vector<PcSubgroup> terms;
};

PcSubgroup whole_group(PcGroupPtr g);
PcSubgroup trivial_subgroup(PcGroupPtr g);

SeriesChain series(PcGroupPtr g, SeriesKind kind);
PcSubgroup derived_subgroup(PcGroupPtr g);
PcSubgroup center(PcGroupPtr g);
int nilpotency_class(PcGroupPtr g);  // length of the lower central series
int derived_length(PcGroupPtr g);

struct QuotientResult {
  PcGroupPtr group;
  PcHom projection;
};
// Quotient by a normal subgroup; the projection is a verified hom whose
// kernel is n. Throws PreconditionError if n is not normal.
QuotientResult quotient(PcGroupPtr g, const PcSubgroup& n);

PcGroupPtr direct_product(const std::vector<PcGroupPtr>& factors);
// Embedding of factor k into the direct product built from the same list.
PcHom product_embedding(const std::vector<PcGroupPtr>& factors, PcGroupPtr product, size_t k);

// x in u * n for normal n: intersection via the kernel of the quotient map
// restricted to u.
PcSubgroup intersect_with_normal(const PcSubgroup& u, const PcSubgroup& n);

// For injective phi and a subgroup x of phi's image: the preimage subgroup.
PcSubgroup preimage_subgroup(const PcHom& phi, const PcSubgroup& x);
// Preimage of a single element of the image (throws if not in the image).
PcElement preimage_element(const PcHom& phi, const PcElement& x);
std::optional<PcElement> try_preimage_element(const PcHom& phi, const PcElement& x);

// Preimage of a subgroup of the codomain under a projection-style hom whose
// generators map to the codomain generators index-by-index.
PcSubgroup projection_preimage(const PcHom& proj, const PcSubgroup& s);

// Cached graph {(phi(x), x)} of a hom, for repeated image-membership and
// preimage queries.
class HomGraph {
 public:
  explicit HomGraph(PcHom phi);
  const PcHom& hom() const { return phi_; }
  bool in_image(const PcElement& x) const { return preimage(x).has_value(); }
  std::optional<PcElement> preimage(const PcElement& x) const;

 private:
  PcHom phi_;
  PcGroupPtr prod_;
  PcSubgroup graph_;
};

// Order of an element: 0 for infinite.
Int element_order(const PcElement& x);

}  // namespace rsolv
