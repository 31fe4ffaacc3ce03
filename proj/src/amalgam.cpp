#include "rsolv/amalgam.hpp"

#include <sstream>

namespace rsolv {

// ----------------------------------------------------------------- building

AmalgamPtr Amalgam::build(std::vector<PcGroupPtr> factors, PcGroupPtr c,
                          std::vector<PcHom> embeddings, std::vector<std::string> factor_names) {
  if (factors.empty()) throw PreconditionError("amalgam needs at least one factor");
  if (embeddings.size() != factors.size())
    throw PreconditionError("amalgam needs one embedding per factor");
  auto out = std::shared_ptr<Amalgam>(new Amalgam());
  for (size_t f = 0; f < factors.size(); ++f) {
    const PcHom& e = embeddings[f];
    if (e.domain() != c || e.codomain() != factors[f])
      throw PreconditionError("embedding " + std::to_string(f) + " has the wrong signature");
    PcSubgroup k = e.kernel();
    if (!k.is_trivial())
      throw PreconditionError("embedding into factor " + std::to_string(f + 1) +
                              " is not injective: " + k.igs().front().str() +
                              " is sent to the identity");
  }
  if (factor_names.empty())
    for (size_t f = 0; f < factors.size(); ++f) factor_names.push_back("F" + std::to_string(f + 1));
  if (factor_names.size() != factors.size())
    throw PreconditionError("amalgam: factor name count mismatch");

  out->factors_ = std::move(factors);
  out->names_ = std::move(factor_names);
  out->c_ = std::move(c);
  out->emb_ = std::move(embeddings);
  for (size_t f = 0; f < out->factors_.size(); ++f) {
    out->images_.push_back(out->emb_[f].image());
    out->pre_.push_back(std::make_shared<HomGraph>(out->emb_[f]));
    for (size_t i = 0; i < out->factors_[f]->ngens(); ++i) {
      const std::string& nm = out->factors_[f]->name(i);
      for (const auto& seen : out->alphabet_)
        if (seen == nm)
          throw PreconditionError("factor generator names must be distinct across factors: '" +
                                  nm + "'");
      out->alphabet_.push_back(nm);
      out->alphabet_map_.emplace_back(f, i);
    }
  }
  return out;
}

AmalgamPtr Amalgam::identify(PcGroupPtr a, const std::vector<PcElement>& c_gens_in_a,
                             PcGroupPtr b, const std::vector<PcElement>& images_in_b,
                             std::vector<std::string> factor_names) {
  if (c_gens_in_a.size() != images_in_b.size())
    throw PreconditionError("identify: generator and image counts differ");
  const size_t na = a->ngens(), nb = b->ngens();

  // The relation graph, echelonized in both orders: a suffix slot in either
  // order is a word trivial on one side but not the other, so the
  // identification would not be an isomorphism of the two subgroups.
  auto graph_check = [](const PcGroupPtr& p, size_t nfirst, const std::vector<PcElement>& fe,
                        const std::vector<PcElement>& se, const char* what) {
    std::vector<PcElement> gens;
    for (size_t t = 0; t < fe.size(); ++t) {
      std::vector<Int> e = fe[t].exps();
      e.insert(e.end(), se[t].exps().begin(), se[t].exps().end());
      gens.push_back(p->element(std::move(e)));
    }
    PcSubgroup graph = PcSubgroup::generated(p, gens);
    for (const auto& h : graph.igs())
      if (static_cast<size_t>(h.leader()) >= nfirst)
        throw PreconditionError(std::string("identification is not an isomorphism: ") + what);
    return graph;
  };
  PcGroupPtr pab = direct_product({a, b});
  PcGroupPtr pba = direct_product({b, a});
  PcSubgroup graph_ab = graph_check(pab, na, c_gens_in_a, images_in_b,
                                    "a trivial word on the A side has a nontrivial image");
  graph_check(pba, nb, images_in_b, c_gens_in_a, "a nontrivial word of C_A dies on the B side");

  PcSubgroup ca = PcSubgroup::generated(a, c_gens_in_a);
  PcSubgroup::AsGroup cg = ca.as_group();
  std::vector<PcElement> b_images;
  for (const auto& slot : ca.igs()) {
    std::vector<Int> e = slot.exps();
    e.resize(na + nb, Int(0));
    PcElement rep = graph_ab.coset_rep(pab->element(std::move(e)));
    for (size_t k = 0; k < na; ++k)
      if (rep.exps()[k] != 0)
        throw std::logic_error("identify: subgroup element did not reduce through the graph");
    std::vector<Int> bpart(rep.exps().begin() + static_cast<long>(na), rep.exps().end());
    b_images.push_back(b->element(std::move(bpart)).inv());
  }
  PcHom phi_b(cg.group, b, std::move(b_images));
  return build({std::move(a), std::move(b)}, cg.group, {cg.inclusion, std::move(phi_b)},
               std::move(factor_names));
}

// ------------------------------------------------------------- normal forms

AmalgamElement Amalgam::identity() const {
  return {shared_from_this(), c_->identity(), {}};
}

AmalgamElement Amalgam::from_c(const PcElement& c) const {
  if (c.group() != c_) throw PreconditionError("from_c: element not in the amalgamated group");
  return {shared_from_this(), c, {}};
}

AmalgamElement Amalgam::from_factor(size_t f, const PcElement& x) const {
  AmalgamElement w = identity();
  mul_letter(w, f, x);
  return w;
}

void Amalgam::push_carry(AmalgamElement& w, PcElement c) const {
  for (size_t pos = w.tail.size(); pos-- > 0;) {
    if (c.is_identity()) return;
    auto& [f, r] = w.tail[pos];
    PcElement y = r.mul(emb_[f].apply(c));
    PcElement rep = images_[f].coset_rep(y);
    if (rep.is_identity())
      throw std::logic_error("push_carry: representative collapsed into the amalgamated subgroup");
    auto pre = pre_[f]->preimage(y.mul(rep.inv()));
    if (!pre) throw std::logic_error("push_carry: carry is not in the amalgamated subgroup");
    r = rep;
    c = *pre;
  }
  w.head = w.head.mul(c);
}

void Amalgam::mul_letter(AmalgamElement& w, size_t f, const PcElement& x) const {
  if (f >= factors_.size()) throw PreconditionError("letter factor index out of range");
  if (x.group() != factors_[f]) throw PreconditionError("letter element not in its factor");
  if (x.is_identity()) return;

  if (!w.tail.empty() && w.tail.back().first == f) {
    PcElement y = w.tail.back().second.mul(x);
    w.tail.pop_back();
    if (auto pre = pre_[f]->preimage(y)) {
      push_carry(w, *pre);
      return;
    }
    PcElement rep = images_[f].coset_rep(y);
    push_carry(w, *pre_[f]->preimage(y.mul(rep.inv())));
    w.tail.push_back({f, rep});
    return;
  }
  if (w.tail.empty()) {
    PcElement y = emb_[f].apply(w.head).mul(x);
    if (auto pre = pre_[f]->preimage(y)) {
      w.head = *pre;
      return;
    }
    PcElement rep = images_[f].coset_rep(y);
    w.head = *pre_[f]->preimage(y.mul(rep.inv()));
    w.tail.push_back({f, rep});
    return;
  }
  if (auto pre = pre_[f]->preimage(x)) {
    push_carry(w, *pre);
    return;
  }
  PcElement rep = images_[f].coset_rep(x);
  push_carry(w, *pre_[f]->preimage(x.mul(rep.inv())));
  w.tail.push_back({f, rep});
}

AmalgamElement Amalgam::normal_form(const std::vector<Letter>& letters) const {
  AmalgamElement w = identity();
  for (const auto& [f, x] : letters) mul_letter(w, f, x);
  return w;
}

AmalgamElement Amalgam::parse(const std::string& text) const {
  Word w = parse_word(text, alphabet_);
  std::vector<Letter> letters;
  for (const auto& s : w.syls) {
    auto [f, local] = alphabet_map_[static_cast<size_t>(s.gen)];
    letters.emplace_back(f, factors_[f]->gen(local).pow(s.exp));
  }
  return normal_form(letters);
}

std::vector<Letter> Amalgam::letters(const AmalgamElement& a) const {
  std::vector<Letter> out;
  out.emplace_back(0, emb_[0].apply(a.head));
  for (const auto& t : a.tail) out.push_back(t);
  return out;
}

AmalgamElement Amalgam::mul(const AmalgamElement& a, const AmalgamElement& b) const {
  if (a.amal.get() != this || b.amal.get() != this)
    throw PreconditionError("amalgam elements from a different amalgam");
  AmalgamElement w = a;
  for (const auto& [f, x] : letters(b)) mul_letter(w, f, x);
  return w;
}

AmalgamElement Amalgam::inv(const AmalgamElement& a) const {
  AmalgamElement w = identity();
  for (auto it = a.tail.rbegin(); it != a.tail.rend(); ++it)
    mul_letter(w, it->first, it->second.inv());
  mul_letter(w, 0, emb_[0].apply(a.head.inv()));
  return w;
}

AmalgamElement Amalgam::conj(const AmalgamElement& x, const AmalgamElement& by) const {
  return mul(mul(inv(by), x), by);
}

AmalgamElement Amalgam::comm_elems(const AmalgamElement& x, const AmalgamElement& y) const {
  return mul(mul(inv(x), inv(y)), mul(x, y));
}

AmalgamElement Amalgam::pow(const AmalgamElement& x, const Int& k) const {
  AmalgamElement base = k < 0 ? inv(x) : x;
  Int n = iabs(k);
  AmalgamElement acc = identity();
  for (Int i = 0; i < n; ++i) acc = mul(acc, base);
  return acc;
}

bool Amalgam::equal(const AmalgamElement& a, const AmalgamElement& b) const {
  return a.head == b.head && a.tail == b.tail;
}

std::string AmalgamElement::str() const {
  if (is_identity()) return "1";
  std::ostringstream os;
  bool first = true;
  if (!head.is_identity()) {
    os << "C[" << head.str() << "]";
    first = false;
  }
  for (const auto& [f, r] : tail) {
    if (!first) os << " * ";
    first = false;
    os << amal->factor_name(f) << "[" << r.str() << "]";
  }
  return os.str();
}

// -------------------------------------------------------------- ExtendedHom

ExtendedHom::ExtendedHom(AmalgamPtr dom, PcGroupPtr cod, std::vector<PcHom> factor_homs)
    : dom_(std::move(dom)), cod_(std::move(cod)), homs_(std::move(factor_homs)) {
  if (homs_.size() != dom_->nfactors())
    throw PreconditionError("extended hom needs one factor hom");
  for (size_t f = 0; f < homs_.size(); ++f)
    if (homs_[f].domain() != dom_->factor(f) || homs_[f].codomain() != cod_)
      throw PreconditionError("factor hom " + std::to_string(f) + " has the wrong signature");
  const PcGroupPtr& c = dom_->c_group();
  for (size_t k = 0; k < c->ngens(); ++k) {
    PcElement via0 = homs_[0].apply(dom_->embedding(0).apply(c->gen(k)));
    for (size_t f = 1; f < homs_.size(); ++f) {
      PcElement viaf = homs_[f].apply(dom_->embedding(f).apply(c->gen(k)));
      if (!(via0 == viaf))
        throw PreconditionError("factor homs disagree on the amalgamated generator '" +
                                c->name(k) + "'");
    }
  }
}

PcElement ExtendedHom::apply(const AmalgamElement& w) const {
  if (w.amal != dom_) throw PreconditionError("extended hom applied outside its domain");
  PcElement acc = homs_[0].apply(dom_->embedding(0).apply(w.head));
  for (const auto& [f, r] : w.tail) acc = acc.mul(homs_[f].apply(r));
  return acc;
}

bool ExtendedHom::reverify() const {
  try {
    for (size_t f = 0; f < homs_.size(); ++f)
      PcHom(homs_[f].domain(), homs_[f].codomain(), homs_[f].images());
    ExtendedHom(dom_, cod_, homs_);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

KernelFacts kernel_misses_factors(const ExtendedHom& h) {
  KernelFacts out;
  out.holds = true;
  for (size_t f = 0; f < h.domain()->nfactors(); ++f) {
    auto cert = h.factor_homs()[f].hirsch_certificate();
    out.certificates.push_back({h.domain()->factor_name(f), cert.first, cert.second});
    out.holds &= cert.first == cert.second;
  }
  return out;
}

KernelFacts kernel_misses_amalgam(const ExtendedHom& h) {
  KernelFacts out;
  PcHom restriction = h.domain()->embedding(0).compose(h.factor_homs()[0]);
  auto cert = restriction.hirsch_certificate();
  out.certificates.push_back({"C", cert.first, cert.second});
  out.holds = cert.first == cert.second;
  return out;
}

// --------------------------------------------------------------- AmalgamHom

AmalgamHom::AmalgamHom(AmalgamPtr dom, AmalgamPtr cod,
                       std::vector<std::vector<AmalgamElement>> images)
    : dom_(std::move(dom)), cod_(std::move(cod)), images_(std::move(images)) {
  if (images_.size() != dom_->nfactors())
    throw PreconditionError("amalgam hom needs images per factor");
  auto apply_vec = [&](size_t f, const std::vector<Int>& v) {
    AmalgamElement acc = cod_->identity();
    for (size_t k = 0; k < v.size(); ++k)
      if (v[k] != 0) acc = cod_->mul(acc, cod_->pow(images_[f][k], v[k]));
    return acc;
  };
  for (size_t f = 0; f < images_.size(); ++f) {
    const PcGroup& g = *dom_->factor(f);
    if (images_[f].size() != g.ngens())
      throw PreconditionError("amalgam hom: image count mismatch on factor " + std::to_string(f));
    for (size_t j = 0; j < g.ngens(); ++j)
      for (size_t i = 0; i < j; ++i) {
        AmalgamElement lhs = cod_->mul(images_[f][j], images_[f][i]);
        AmalgamElement rhs =
            cod_->mul(cod_->mul(images_[f][i], images_[f][j]), apply_vec(f, g.conj_tails(j)[i]));
        if (!cod_->equal(lhs, rhs))
          throw PreconditionError("amalgam hom violates [" + g.name(j) + "," + g.name(i) +
                                  "] in factor " + dom_->factor_name(f));
      }
    for (size_t i = 0; i < g.ngens(); ++i) {
      if (g.order(i) == 0) continue;
      AmalgamElement lhs = cod_->pow(images_[f][i], g.order(i));
      AmalgamElement rhs = apply_vec(f, g.power_tail(i));
      if (!cod_->equal(lhs, rhs))
        throw PreconditionError("amalgam hom violates the power relation of " + g.name(i) +
                                " in factor " + dom_->factor_name(f));
    }
  }
  const PcGroupPtr& c = dom_->c_group();
  for (size_t k = 0; k < c->ngens(); ++k) {
    AmalgamElement via0 = apply_vec(0, dom_->embedding(0).apply(c->gen(k)).exps());
    for (size_t f = 1; f < images_.size(); ++f) {
      AmalgamElement viaf = apply_vec(f, dom_->embedding(f).apply(c->gen(k)).exps());
      if (!cod_->equal(via0, viaf))
        throw PreconditionError("amalgam hom factor maps disagree on '" + c->name(k) + "'");
    }
  }
}

AmalgamElement AmalgamHom::apply(const AmalgamElement& w) const {
  if (w.amal != dom_) throw PreconditionError("amalgam hom applied outside its domain");
  auto apply_vec = [&](size_t f, const std::vector<Int>& v) {
    AmalgamElement acc = cod_->identity();
    for (size_t k = 0; k < v.size(); ++k)
      if (v[k] != 0) acc = cod_->mul(acc, cod_->pow(images_[f][k], v[k]));
    return acc;
  };
  AmalgamElement acc = apply_vec(0, dom_->embedding(0).apply(w.head).exps());
  for (const auto& [f, r] : w.tail) acc = cod_->mul(acc, apply_vec(f, r.exps()));
  return acc;
}

bool AmalgamHom::reverify() const {
  try {
    AmalgamHom(dom_, cod_, images_);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

// ------------------------------------------------------------------ doubles

Double make_double(PcGroupPtr a, const PcSubgroup& c) {
  if (c.ambient() != a) throw PreconditionError("double: subgroup of a different group");
  PcGroupPtr b = a->renamed_copy("_2");
  std::vector<PcElement> fw, bw;
  for (size_t i = 0; i < a->ngens(); ++i) {
    fw.push_back(b->gen(i));
    bw.push_back(a->gen(i));
  }
  PcHom iso(a, b, std::move(fw));
  PcHom iso_inv(b, a, std::move(bw));
  PcSubgroup::AsGroup cg = c.as_group();
  AmalgamPtr d = Amalgam::build({a, b}, cg.group, {cg.inclusion, cg.inclusion.compose(iso)},
                                {"A", "B"});
  ExtendedHom psi(d, a, {PcHom::identity(a), iso_inv});
  return {d, std::move(iso), std::move(psi)};
}

Double make_multi_double(PcGroupPtr a, const PcSubgroup& c, size_t k) {
  if (k < 2) throw PreconditionError("multi double needs at least two factors");
  PcSubgroup::AsGroup cg = c.as_group();
  std::vector<PcGroupPtr> factors{a};
  std::vector<PcHom> embeddings{cg.inclusion};
  std::vector<PcHom> retr{PcHom::identity(a)};
  std::vector<std::string> names{"A1"};
  PcHom first_iso = PcHom::identity(a);
  for (size_t i = 2; i <= k; ++i) {
    PcGroupPtr copy = a->renamed_copy("_" + std::to_string(i));
    std::vector<PcElement> fw, bw;
    for (size_t m = 0; m < a->ngens(); ++m) {
      fw.push_back(copy->gen(m));
      bw.push_back(a->gen(m));
    }
    PcHom iso(a, copy, std::move(fw));
    if (i == 2) first_iso = iso;
    embeddings.push_back(cg.inclusion.compose(iso));
    retr.emplace_back(copy, a, std::move(bw));
    factors.push_back(copy);
    names.push_back("A" + std::to_string(i));
  }
  AmalgamPtr d = Amalgam::build(std::move(factors), cg.group, std::move(embeddings),
                                std::move(names));
  ExtendedHom psi(d, a, std::move(retr));
  return {d, std::move(first_iso), std::move(psi)};
}

}  // namespace rsolv
