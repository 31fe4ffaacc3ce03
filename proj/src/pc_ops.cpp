#include <algorithm>
#include <sstream>

#include "rsolv/pc.hpp"

namespace rsolv {

// -------------------------------------------------------------------- PcHom

PcHom::PcHom(PcGroupPtr domain, PcGroupPtr codomain, std::vector<PcElement> images)
    : dom_(std::move(domain)), cod_(std::move(codomain)), images_(std::move(images)) {
  const size_t n = dom_->ngens();
  if (images_.size() != n) throw PreconditionError("hom needs one image per generator");
  for (const auto& x : images_)
    if (x.group() != cod_) throw PreconditionError("hom image lies in the wrong codomain");

  auto apply_vec = [&](const std::vector<Int>& v) {
    PcElement acc = cod_->identity();
    for (size_t k = 0; k < n; ++k)
      if (v[k] != 0) acc = acc.mul(images_[k].pow(v[k]));
    return acc;
  };
  // Von Dyck: each defining relation must map to a relation of the codomain.
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < j; ++i) {
      PcElement lhs = images_[j].mul(images_[i]);
      PcElement rhs = images_[i].mul(images_[j]).mul(apply_vec(dom_->conj_tails(j)[i]));
      if (!(lhs == rhs))
        throw PreconditionError("hom violates the relation [" + dom_->name(j) + "," +
                                dom_->name(i) + "] = tail");
    }
  for (size_t i = 0; i < n; ++i) {
    if (dom_->order(i) == 0) continue;
    PcElement lhs = images_[i].pow(dom_->order(i));
    PcElement rhs = apply_vec(dom_->power_tail(i));
    if (!(lhs == rhs))
      throw PreconditionError("hom violates the relation " + dom_->name(i) + "^" +
                              dom_->order(i).str() + " = tail");
  }
}

PcElement PcHom::apply(const PcElement& x) const {
  if (x.group() != dom_) throw PreconditionError("hom applied outside its domain");
  PcElement acc = cod_->identity();
  for (size_t k = 0; k < dom_->ngens(); ++k)
    if (x.exps()[k] != 0) acc = acc.mul(images_[k].pow(x.exps()[k]));
  return acc;
}

PcHom PcHom::compose(const PcHom& then) const {
  if (cod_ != then.dom_) throw PreconditionError("hom composition mismatch");
  std::vector<PcElement> images;
  images.reserve(images_.size());
  for (const auto& x : images_) images.push_back(then.apply(x));
  return {dom_, then.cod_, std::move(images)};
}

PcSubgroup PcHom::image() const { return PcSubgroup::generated(cod_, images_); }

PcSubgroup PcHom::kernel() const {
  // Induced sequence of the graph {(phi(x), x)} in codomain x domain: the
  // slots with leaders in the domain block are exactly the kernel.
  PcGroupPtr p = direct_product({cod_, dom_});
  const size_t nc = cod_->ngens(), nd = dom_->ngens();
  std::vector<PcElement> graph_gens;
  for (size_t i = 0; i < nd; ++i) {
    std::vector<Int> e(nc + nd, Int(0));
    for (size_t k = 0; k < nc; ++k) e[k] = images_[i].exps()[k];
    e[nc + i] = 1;
    graph_gens.push_back(p->element(std::move(e)));
  }
  PcSubgroup graph = PcSubgroup::generated(p, graph_gens);
  std::vector<PcElement> kernel_gens;
  for (const auto& h : graph.igs()) {
    if (static_cast<size_t>(h.leader()) < nc) continue;
    std::vector<Int> e(h.exps().begin() + static_cast<long>(nc), h.exps().end());
    kernel_gens.push_back(dom_->element(std::move(e)));
  }
  return PcSubgroup::generated(dom_, kernel_gens);
}

std::pair<size_t, size_t> PcHom::hirsch_certificate() const {
  return {dom_->hirsch_length(), image().hirsch_length()};
}

PcHom PcHom::identity(PcGroupPtr g) {
  std::vector<PcElement> images;
  for (size_t i = 0; i < g->ngens(); ++i) images.push_back(g->gen(i));
  return {g, g, std::move(images)};
}

// ----------------------------------------------------------- direct products

PcGroupPtr direct_product(const std::vector<PcGroupPtr>& factors) {
  PcData d;
  size_t total = 0;
  for (const auto& f : factors) total += f->ngens();
  d.orders.reserve(total);
  d.conj_tail.assign(total, {});
  for (size_t j = 0; j < total; ++j) d.conj_tail[j].assign(j, std::vector<Int>(total, Int(0)));
  d.power_tail.assign(total, std::vector<Int>(total, Int(0)));
  int cls = 1;

  size_t offset = 0;
  for (size_t f = 0; f < factors.size(); ++f) {
    const PcGroup& g = *factors[f];
    std::string suffix = "_" + std::to_string(f + 1);
    for (size_t i = 0; i < g.ngens(); ++i) {
      std::string name = g.name(i) + suffix;
      while (std::find(d.names.begin(), d.names.end(), name) != d.names.end()) name += "_";
      d.names.push_back(name);
      d.orders.push_back(g.order(i));
    }
    for (size_t j = 0; j < g.ngens(); ++j) {
      for (size_t i = 0; i < j; ++i)
        for (size_t k = 0; k < g.ngens(); ++k)
          d.conj_tail[offset + j][offset + i][offset + k] = g.conj_tails(j)[i][k];
      if (g.order(j) != 0)
        for (size_t k = 0; k < g.ngens(); ++k)
          d.power_tail[offset + j][offset + k] = g.power_tail(j)[k];
    }
    cls = std::max(cls, g.nilpotency_class_bound());
    offset += g.ngens();
  }
  d.declared_class = cls;
  return PcGroup::build(std::move(d));
}

PcHom product_embedding(const std::vector<PcGroupPtr>& factors, PcGroupPtr product, size_t k) {
  size_t offset = 0;
  for (size_t f = 0; f < k; ++f) offset += factors[f]->ngens();
  std::vector<PcElement> images;
  for (size_t i = 0; i < factors[k]->ngens(); ++i) images.push_back(product->gen(offset + i));
  return {factors[k], std::move(product), std::move(images)};
}

// ------------------------------------------------------------------ quotient

QuotientResult quotient(PcGroupPtr g, const PcSubgroup& n) {
  if (n.ambient() != g) throw PreconditionError("quotient: subgroup of a different group");
  if (!n.is_normal()) throw PreconditionError("quotient: subgroup is not normal");

  const size_t ng = g->ngens();
  std::vector<const PcElement*> leader_slot(ng, nullptr);
  for (const auto& h : n.igs()) leader_slot[static_cast<size_t>(h.leader())] = &h;

  PcData d;
  d.names = g->names();
  d.orders.assign(ng, Int(0));
  d.conj_tail.assign(ng, {});
  for (size_t j = 0; j < ng; ++j) d.conj_tail[j].assign(j, std::vector<Int>(ng, Int(0)));
  d.power_tail.assign(ng, std::vector<Int>(ng, Int(0)));
  d.declared_class = g->nilpotency_class_bound();

  for (size_t m = 0; m < ng; ++m)
    d.orders[m] = leader_slot[m] ? leader_slot[m]->lead_exp() : g->order(m);

  // Tails are canonical coset representatives of the corresponding elements.
  for (size_t j = 0; j < ng; ++j)
    for (size_t i = 0; i < j; ++i) {
      PcElement t = n.coset_rep(g->element([&] {
        std::vector<Int> v = g->conj_tails(j)[i];
        return v;
      }()));
      d.conj_tail[j][i] = t.exps();
    }
  for (size_t m = 0; m < ng; ++m) {
    if (d.orders[m] == 0) continue;
    PcElement t = n.coset_rep(g->gen(m).pow(d.orders[m]));
    d.power_tail[m] = t.exps();
  }

  PcGroupPtr q = PcGroup::build(std::move(d));
  std::vector<PcElement> proj_images;
  for (size_t m = 0; m < ng; ++m) {
    std::vector<Int> unit(ng, Int(0));
    unit[m] = 1;
    proj_images.push_back(q->element(std::move(unit)));
  }
  PcHom proj(g, q, std::move(proj_images));
  return {q, std::move(proj)};
}

// -------------------------------------------------------------------- series

namespace {

PcSubgroup commutator_closure(PcGroupPtr g, const std::vector<PcElement>& left,
                              const std::vector<PcElement>& right) {
  std::vector<PcElement> gens;
  for (const auto& a : left)
    for (const auto& b : right) gens.push_back(comm(a, b));
  return PcSubgroup::generated(std::move(g), gens, /*normal_closure=*/true);
}

}  // namespace

PcSubgroup derived_subgroup(PcGroupPtr g) {
  std::vector<PcElement> gens;
  for (size_t i = 0; i < g->ngens(); ++i) gens.push_back(g->gen(i));
  return commutator_closure(g, gens, gens);
}

SeriesChain series(PcGroupPtr g, SeriesKind kind) {
  SeriesChain out{kind, {}};
  const int cap = g->nilpotency_class_bound() + 2;
  if (kind == SeriesKind::LowerCentral) {
    std::vector<PcElement> gens;
    for (size_t i = 0; i < g->ngens(); ++i) gens.push_back(g->gen(i));
    out.terms.push_back(whole_group(g));
    while (!out.terms.back().is_trivial()) {
      if (static_cast<int>(out.terms.size()) > cap)
        throw ConsistencyError("lower central series does not terminate within the class bound");
      out.terms.push_back(commutator_closure(g, out.terms.back().igs(), gens));
    }
    return out;
  }
  if (kind == SeriesKind::Derived) {
    out.terms.push_back(whole_group(g));
    while (!out.terms.back().is_trivial()) {
      if (static_cast<int>(out.terms.size()) > cap + 2)
        throw ConsistencyError("derived series does not terminate");
      const auto& h = out.terms.back().igs();
      out.terms.push_back(commutator_closure(g, h, h));
    }
    return out;
  }
  // Upper central: xi_{i+1} is the preimage of the center of G / xi_i.
  out.terms.push_back(trivial_subgroup(g));
  PcSubgroup whole = whole_group(g);
  while (!out.terms.back().same_subgroup(whole)) {
    if (static_cast<int>(out.terms.size()) > cap)
      throw ConsistencyError("upper central series does not reach the group within the class");
    QuotientResult q = quotient(g, out.terms.back());
    PcSubgroup zq = center(q.group);
    out.terms.push_back(projection_preimage(q.projection, zq));
  }
  return out;
}

int nilpotency_class(PcGroupPtr g) {
  return static_cast<int>(series(std::move(g), SeriesKind::LowerCentral).terms.size()) - 1;
}

int derived_length(PcGroupPtr g) {
  return static_cast<int>(series(std::move(g), SeriesKind::Derived).terms.size()) - 1;
}

PcSubgroup center(PcGroupPtr g) {
  SeriesChain lcs = series(g, SeriesKind::LowerCentral);
  if (lcs.terms.size() <= 2) return whole_group(g);  // trivial or abelian

  // Z := the last nontrivial lower-central term is central; pass to G/Z,
  // take the center there, pull back, and cut down by the now-linear
  // commutation conditions [z, g_j] = 1 with values in Z.
  const PcSubgroup& z = lcs.terms[lcs.terms.size() - 2];
  QuotientResult q = quotient(g, z);
  PcSubgroup zq = center(q.group);
  PcSubgroup p = projection_preimage(q.projection, zq);

  PcSubgroup::AsGroup pg = p.as_group();
  const size_t m = g->ngens();
  std::vector<PcGroupPtr> copies(m, g);
  PcGroupPtr w = direct_product(copies);
  std::vector<PcElement> lambda_images;
  for (const auto& h : p.igs()) {
    std::vector<Int> e;
    e.reserve(m * m);
    PcElement hg = h;
    for (size_t j = 0; j < m; ++j) {
      PcElement c = comm(hg, g->gen(j));
      e.insert(e.end(), c.exps().begin(), c.exps().end());
    }
    lambda_images.push_back(w->element(std::move(e)));
  }
  PcHom lambda(pg.group, w, std::move(lambda_images));
  PcSubgroup k = lambda.kernel();
  std::vector<PcElement> central;
  for (const auto& x : k.igs()) central.push_back(pg.inclusion.apply(x));
  return PcSubgroup::generated(g, central);
}

// ----------------------------------------------- intersections and preimages

PcSubgroup intersect_with_normal(const PcSubgroup& u, const PcSubgroup& n) {
  if (u.ambient() != n.ambient()) throw PreconditionError("intersection: different ambients");
  PcGroupPtr g = u.ambient();
  QuotientResult q = quotient(g, n);
  PcSubgroup::AsGroup ug = u.as_group();
  std::vector<PcElement> images;
  for (const auto& h : u.igs()) images.push_back(q.projection.apply(h));
  PcHom psi(ug.group, q.group, std::move(images));
  PcSubgroup k = psi.kernel();
  std::vector<PcElement> gens;
  for (const auto& x : k.igs()) gens.push_back(ug.inclusion.apply(x));
  return PcSubgroup::generated(g, gens);
}

HomGraph::HomGraph(PcHom phi) : phi_(std::move(phi)) {
  prod_ = direct_product({phi_.codomain(), phi_.domain()});
  const size_t nc = phi_.codomain()->ngens(), nd = phi_.domain()->ngens();
  std::vector<PcElement> graph_gens;
  for (size_t i = 0; i < nd; ++i) {
    std::vector<Int> e(nc + nd, Int(0));
    for (size_t k = 0; k < nc; ++k) e[k] = phi_.images()[i].exps()[k];
    e[nc + i] = 1;
    graph_gens.push_back(prod_->element(std::move(e)));
  }
  graph_ = PcSubgroup::generated(prod_, graph_gens);
}

std::optional<PcElement> HomGraph::preimage(const PcElement& x) const {
  if (x.group() != phi_.codomain()) throw PreconditionError("preimage: element not in codomain");
  const size_t nc = phi_.codomain()->ngens(), nd = phi_.domain()->ngens();
  std::vector<Int> target(nc + nd, Int(0));
  for (size_t k = 0; k < nc; ++k) target[k] = x.exps()[k];
  PcElement rep = graph_.coset_rep(prod_->element(std::move(target)));
  for (size_t k = 0; k < nc; ++k)
    if (rep.exps()[k] != 0) return std::nullopt;  // x is not in the image
  std::vector<Int> cpart(rep.exps().begin() + static_cast<long>(nc), rep.exps().end());
  return phi_.domain()->element(std::move(cpart)).inv();
}

std::optional<PcElement> try_preimage_element(const PcHom& phi, const PcElement& x) {
  return HomGraph(phi).preimage(x);
}

PcElement preimage_element(const PcHom& phi, const PcElement& x) {
  auto pre = try_preimage_element(phi, x);
  if (!pre) throw PreconditionError("element is not in the image of the hom");
  return *pre;
}

PcSubgroup preimage_subgroup(const PcHom& phi, const PcSubgroup& x) {
  std::vector<PcElement> gens;
  for (const auto& h : x.igs()) gens.push_back(preimage_element(phi, h));
  return PcSubgroup::generated(phi.domain(), gens);
}

PcSubgroup projection_preimage(const PcHom& proj, const PcSubgroup& s) {
  if (s.ambient() != proj.codomain()) throw PreconditionError("projection_preimage: wrong group");
  if (proj.domain()->ngens() != proj.codomain()->ngens())
    throw PreconditionError("projection_preimage expects an index-wise projection");
  std::vector<PcElement> gens;
  for (const auto& h : s.igs()) {
    std::vector<Int> e = h.exps();
    gens.push_back(proj.domain()->element(std::move(e)));
  }
  PcSubgroup ker = proj.kernel();
  for (const auto& h : ker.igs()) gens.push_back(h);
  return PcSubgroup::generated(proj.domain(), gens);
}

}  // namespace rsolv
