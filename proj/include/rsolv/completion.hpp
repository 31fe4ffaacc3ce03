#pragma once

// Exact rational Mal'cev completion for torsion-free pc groups of nilpotency
// class at most 2: coordinates in Q^n, closed-form multiplication with the
// bilinear central correction, unique n-th roots, and homomorphisms with
// Von Dyck verification. Class 3 and higher is out of scope by design.

#include "rsolv/amalgam.hpp"
#include "rsolv/pc.hpp"

namespace rsolv {

class RatNilp2;
using RatNilp2Ptr = std::shared_ptr<const RatNilp2>;

struct RatElement {
  RatNilp2Ptr group;
  std::vector<Rat> coords;

  bool is_identity() const;
  bool operator==(const RatElement& o) const { return group == o.group && coords == o.coords; }
  std::string str() const;
};

class RatNilp2 : public std::enable_shared_from_this<RatNilp2> {
 public:
  // Requires: torsion-free, class <= 2, every generator appearing in a
  // conjugation tail is central.
  static RatNilp2Ptr build(PcGroupPtr base);

  const PcGroupPtr& base() const { return base_; }
  size_t ngens() const { return base_->ngens(); }
  bool is_central_gen(size_t k) const { return central_[k]; }

  RatElement identity() const;
  RatElement element(std::vector<Rat> coords) const;
  RatElement from_base(const PcElement& x) const;

  RatElement mul(const RatElement& a, const RatElement& b) const;
  RatElement inv(const RatElement& a) const;
  RatElement pow(const RatElement& a, const Int& n) const;
  // The unique y with y^n = a (n != 0).
  RatElement root(const RatElement& a, const Int& n) const;

 private:
  RatNilp2() = default;
  PcGroupPtr base_;
  std::vector<bool> central_;  // receives no nontrivial commutator with anything
};

// A homomorphism from a pc group into a completion, verified on the
// defining relations.
class RatHom {
 public:
  RatHom() = default;
  RatHom(PcGroupPtr dom, RatNilp2Ptr cod, std::vector<RatElement> images);

  const PcGroupPtr& domain() const { return dom_; }
  const RatNilp2Ptr& codomain() const { return cod_; }
  const std::vector<RatElement>& images() const { return images_; }
  RatElement apply(const PcElement& x) const;
  bool reverify() const;

 private:
  PcGroupPtr dom_;
  RatNilp2Ptr cod_;
  std::vector<RatElement> images_;
};

// Rational rank certificate that a RatHom embeds its (class <= 2,
// torsion-free) domain: ranks over Q of the abelianized layer and of the
// derived layer both equal the domain's layer Hirsch lengths.
struct RationalRankCertificate {
  std::string label;
  size_t ab_rank_expected = 0, ab_rank_actual = 0;
  size_t derived_rank_expected = 0, derived_rank_actual = 0;
  bool preserved() const {
    return ab_rank_expected == ab_rank_actual && derived_rank_expected == derived_rank_actual;
  }
};
RationalRankCertificate rational_injectivity_certificate(const RatHom& h, const std::string& label);

// Extension of per-factor homs over an amalgam, landing in a completion.
class RatExtendedHom {
 public:
  RatExtendedHom() = default;
  RatExtendedHom(AmalgamPtr dom, RatNilp2Ptr cod, std::vector<RatHom> factor_homs);

  const AmalgamPtr& domain() const { return dom_; }
  const RatNilp2Ptr& codomain() const { return cod_; }
  const std::vector<RatHom>& factor_homs() const { return homs_; }
  RatElement apply(const AmalgamElement& w) const;
  bool reverify() const;

 private:
  AmalgamPtr dom_;
  RatNilp2Ptr cod_;
  std::vector<RatHom> homs_;
};

// Largest denominator appearing in the coordinates of the images.
Int max_denominator(const RatHom& h);

}  // namespace rsolv
