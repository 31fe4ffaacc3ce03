#include "rsolv/completion.hpp"

#include <sstream>

namespace rsolv {

namespace {

Rat binom2(const Rat& n) { return n * (n - 1) / 2; }

}  // namespace

bool RatElement::is_identity() const {
  for (const auto& c : coords)
    if (c != 0) return false;
  return true;
}

std::string RatElement::str() const {
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < coords.size(); ++k) {
    if (coords[k] == 0) continue;
    if (!first) os << "*";
    first = false;
    os << group->base()->name(k) << "^(" << coords[k].str() << ")";
  }
  return first ? "1" : os.str();
}

RatNilp2Ptr RatNilp2::build(PcGroupPtr base) {
  if (!base->is_torsion_free())
    throw PreconditionError("completion requires a torsion-free group");
  const size_t n = base->ngens();
  auto out = std::shared_ptr<RatNilp2>(new RatNilp2());
  out->central_.assign(n, true);
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < j; ++i) {
      bool trivial = true;
      for (const auto& x : base->conj_tails(j)[i]) trivial &= (x == 0);
      if (!trivial) {
        out->central_[i] = out->central_[j] = false;
      }
    }
  // class <= 2 with central tails: every generator in a tail must be central
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < j; ++i)
      for (size_t k = 0; k < n; ++k)
        if (base->conj_tails(j)[i][k] != 0 && !out->central_[k])
          throw PreconditionError("completion supports class <= 2 only (tail of [" +
                                  base->name(j) + "," + base->name(i) +
                                  "] meets the non-central generator " + base->name(k) + ")");
  out->base_ = std::move(base);
  return out;
}

RatElement RatNilp2::identity() const {
  return {shared_from_this(), std::vector<Rat>(ngens(), Rat(0))};
}

RatElement RatNilp2::element(std::vector<Rat> coords) const {
  if (coords.size() != ngens()) throw PreconditionError("wrong coordinate count");
  return {shared_from_this(), std::move(coords)};
}

RatElement RatNilp2::from_base(const PcElement& x) const {
  if (x.group() != base_) throw PreconditionError("from_base: element of a different group");
  std::vector<Rat> c;
  c.reserve(ngens());
  for (const auto& e : x.exps()) c.emplace_back(e);
  return {shared_from_this(), std::move(c)};
}

RatElement RatNilp2::mul(const RatElement& a, const RatElement& b) const {
  if (a.group.get() != this || b.group.get() != this)
    throw PreconditionError("completion elements from a different completion");
  std::vector<Rat> c(ngens());
  for (size_t k = 0; k < ngens(); ++k) c[k] = a.coords[k] + b.coords[k];
  // moving b's g_i across a's g_j (j > i) deposits t_ji^{a_j b_i}
  for (size_t j = 0; j < ngens(); ++j) {
    if (a.coords[j] == 0) continue;
    for (size_t i = 0; i < j; ++i) {
      if (b.coords[i] == 0) continue;
      const auto& tail = base_->conj_tails(j)[i];
      for (size_t k = 0; k < ngens(); ++k)
        if (tail[k] != 0) c[k] += a.coords[j] * b.coords[i] * Rat(tail[k]);
    }
  }
  return {shared_from_this(), std::move(c)};
}

RatElement RatNilp2::pow(const RatElement& a, const Int& n) const {
  // a^n = n * a on the free coordinates plus C(n,2) * w(a) on the tails
  std::vector<Rat> c(ngens());
  Rat nn(n);
  for (size_t k = 0; k < ngens(); ++k) c[k] = nn * a.coords[k];
  for (size_t j = 0; j < ngens(); ++j) {
    if (a.coords[j] == 0) continue;
    for (size_t i = 0; i < j; ++i) {
      if (a.coords[i] == 0) continue;
      const auto& tail = base_->conj_tails(j)[i];
      for (size_t k = 0; k < ngens(); ++k)
        if (tail[k] != 0) c[k] += binom2(nn) * a.coords[j] * a.coords[i] * Rat(tail[k]);
    }
  }
  return {shared_from_this(), std::move(c)};
}

RatElement RatNilp2::inv(const RatElement& a) const { return pow(a, -1); }

RatElement RatNilp2::root(const RatElement& a, const Int& n) const {
  if (n == 0) throw PreconditionError("0th root");
  std::vector<Rat> x(ngens());
  Rat nn(n);
  // non-receiving coordinates first, then solve the corrected ones
  std::vector<bool> receives(ngens(), false);
  for (size_t j = 0; j < ngens(); ++j)
    for (size_t i = 0; i < j; ++i)
      for (size_t k = 0; k < ngens(); ++k)
        if (base_->conj_tails(j)[i][k] != 0) receives[k] = true;
  for (size_t k = 0; k < ngens(); ++k)
    if (!receives[k]) x[k] = a.coords[k] / nn;
  for (size_t k = 0; k < ngens(); ++k) {
    if (!receives[k]) continue;
    Rat w(0);
    for (size_t j = 0; j < ngens(); ++j)
      for (size_t i = 0; i < j; ++i) {
        const auto& tail = base_->conj_tails(j)[i];
        if (tail[k] != 0) w += x[j] * x[i] * Rat(tail[k]);
      }
    x[k] = (a.coords[k] - binom2(nn) * w) / nn;
  }
  RatElement out{shared_from_this(), std::move(x)};
  if (!(pow(out, n) == a)) throw std::logic_error("root verification failed");
  return out;
}

// -------------------------------------------------------------------- RatHom

RatHom::RatHom(PcGroupPtr dom, RatNilp2Ptr cod, std::vector<RatElement> images)
    : dom_(std::move(dom)), cod_(std::move(cod)), images_(std::move(images)) {
  if (images_.size() != dom_->ngens())
    throw PreconditionError("rational hom needs one image per generator");
  if (!dom_->is_torsion_free())
    throw PreconditionError("rational hom requires a torsion-free domain");
  auto apply_vec = [&](const std::vector<Int>& v) {
    RatElement acc = cod_->identity();
    for (size_t k = 0; k < v.size(); ++k)
      if (v[k] != 0) acc = cod_->mul(acc, cod_->pow(images_[k], v[k]));
    return acc;
  };
  for (size_t j = 0; j < dom_->ngens(); ++j)
    for (size_t i = 0; i < j; ++i) {
      RatElement lhs = cod_->mul(images_[j], images_[i]);
      RatElement rhs =
          cod_->mul(cod_->mul(images_[i], images_[j]), apply_vec(dom_->conj_tails(j)[i]));
      if (!(lhs == rhs))
        throw PreconditionError("rational hom violates [" + dom_->name(j) + "," + dom_->name(i) +
                                "] = tail");
    }
}

RatElement RatHom::apply(const PcElement& x) const {
  if (x.group() != dom_) throw PreconditionError("rational hom applied outside its domain");
  RatElement acc = cod_->identity();
  for (size_t k = 0; k < dom_->ngens(); ++k)
    if (x.exps()[k] != 0) acc = cod_->mul(acc, cod_->pow(images_[k], x.exps()[k]));
  return acc;
}

bool RatHom::reverify() const {
  try {
    RatHom(dom_, cod_, images_);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

// --------------------------------------------------------- rank certificates

namespace {

// Rank over Q of a list of rational rows, by clearing denominators per row.
size_t rational_rank(const std::vector<std::vector<Rat>>& rows, size_t cols) {
  IntMatrix m(0, cols);
  for (const auto& row : rows) {
    Int scale = 1;
    for (const auto& x : row) scale = lcm(scale, denominator(x));
    std::vector<Int> cleared(cols);
    for (size_t k = 0; k < cols; ++k)
      cleared[k] = numerator(row[k]) * (scale / denominator(row[k]));
    m.append_row(cleared);
  }
  return m.rank();
}

}  // namespace

RationalRankCertificate rational_injectivity_certificate(const RatHom& h,
                                                         const std::string& label) {
  RationalRankCertificate out;
  out.label = label;
  const PcGroupPtr& a = h.domain();
  const size_t nc = h.codomain()->ngens();

  PcSubgroup der = derived_subgroup(a);
  out.ab_rank_expected = a->hirsch_length() - der.hirsch_length();
  out.derived_rank_expected = der.hirsch_length();

  // Span of the codomain's derived layer: the tail vectors of the base group.
  std::vector<std::vector<Rat>> v2;
  const PcGroup& cb = *h.codomain()->base();
  for (size_t j = 0; j < nc; ++j)
    for (size_t i = 0; i < j; ++i) {
      bool trivial = true;
      std::vector<Rat> row(nc, Rat(0));
      for (size_t k = 0; k < nc; ++k) {
        if (cb.conj_tails(j)[i][k] != 0) trivial = false;
        row[k] = Rat(cb.conj_tails(j)[i][k]);
      }
      if (!trivial) v2.push_back(std::move(row));
    }
  size_t v2_rank = rational_rank(v2, nc);

  // Abelianized layer: images of the generators modulo the derived span.
  std::vector<std::vector<Rat>> ab_rows = v2;
  for (size_t i = 0; i < a->ngens(); ++i) ab_rows.push_back(h.images()[i].coords);
  out.ab_rank_actual = rational_rank(ab_rows, nc) - v2_rank;

  // Derived layer: images of the derived subgroup's induced sequence.
  std::vector<std::vector<Rat>> der_rows;
  for (const auto& d : der.igs()) der_rows.push_back(h.apply(d).coords);
  out.derived_rank_actual = rational_rank(der_rows, nc);
  return out;
}

// ------------------------------------------------------------ RatExtendedHom

RatExtendedHom::RatExtendedHom(AmalgamPtr dom, RatNilp2Ptr cod, std::vector<RatHom> factor_homs)
    : dom_(std::move(dom)), cod_(std::move(cod)), homs_(std::move(factor_homs)) {
  if (homs_.size() != dom_->nfactors())
    throw PreconditionError("rational extended hom needs one hom per factor");
  const PcGroupPtr& c = dom_->c_group();
  for (size_t k = 0; k < c->ngens(); ++k) {
    RatElement via0 = homs_[0].apply(dom_->embedding(0).apply(c->gen(k)));
    for (size_t f = 1; f < homs_.size(); ++f)
      if (!(homs_[f].apply(dom_->embedding(f).apply(c->gen(k))) == via0))
        throw PreconditionError("completion extension disagrees on the amalgamated generator '" +
                                c->name(k) + "'");
  }
}

RatElement RatExtendedHom::apply(const AmalgamElement& w) const {
  if (w.amal != dom_) throw PreconditionError("rational extended hom applied outside its domain");
  RatElement acc = homs_[0].apply(dom_->embedding(0).apply(w.head));
  for (const auto& [f, r] : w.tail) acc = cod_->mul(acc, homs_[f].apply(r));
  return acc;
}

bool RatExtendedHom::reverify() const {
  try {
    for (const auto& h : homs_)
      if (!h.reverify()) return false;
    RatExtendedHom(dom_, cod_, homs_);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

Int max_denominator(const RatHom& h) {
  Int m = 1;
  for (const auto& img : h.images())
    for (const auto& c : img.coords) m = std::max(m, Int(denominator(c)));
  return m;
}

}  // namespace rsolv
