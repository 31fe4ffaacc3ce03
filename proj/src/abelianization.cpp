#include "rsolv/abelianization.hpp"

namespace rsolv {

IntMatrix pc_relation_matrix(const PcGroup& g) {
  const size_t n = g.ngens();
  IntMatrix m(0, n);
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < j; ++i) {
      const auto& tail = g.conj_tails(j)[i];
      bool trivial = true;
      for (const auto& x : tail) trivial &= (x == 0);
      if (!trivial) m.append_row(tail);
    }
  for (size_t i = 0; i < n; ++i) {
    if (g.order(i) == 0) continue;
    std::vector<Int> row(n, Int(0));
    row[i] = g.order(i);
    for (size_t k = 0; k < n; ++k) row[k] -= g.power_tail(i)[k];
    m.append_row(row);
  }
  return m;
}

IntMatrix amalgam_relation_matrix(const Amalgam& g) {
  std::vector<size_t> offsets;
  size_t total = 0;
  for (size_t f = 0; f < g.nfactors(); ++f) {
    offsets.push_back(total);
    total += g.factor(f)->ngens();
  }
  IntMatrix m(0, total);
  for (size_t f = 0; f < g.nfactors(); ++f) {
    IntMatrix block = pc_relation_matrix(*g.factor(f));
    for (size_t r = 0; r < block.rows(); ++r) {
      std::vector<Int> row(total, Int(0));
      for (size_t k = 0; k < g.factor(f)->ngens(); ++k) row[offsets[f] + k] = block.at(r, k);
      m.append_row(row);
    }
  }
  const PcGroupPtr& c = g.c_group();
  for (size_t f = 0; f + 1 < g.nfactors(); ++f)
    for (size_t k = 0; k < c->ngens(); ++k) {
      std::vector<Int> row(total, Int(0));
      PcElement lhs = g.embedding(f).apply(c->gen(k));
      PcElement rhs = g.embedding(f + 1).apply(c->gen(k));
      for (size_t i = 0; i < g.factor(f)->ngens(); ++i) row[offsets[f] + i] = lhs.exps()[i];
      for (size_t i = 0; i < g.factor(f + 1)->ngens(); ++i)
        row[offsets[f + 1] + i] -= rhs.exps()[i];
      m.append_row(row);
    }
  return m;
}

namespace {

AbelianizationResult from_cokernel(const CokernelResult& ck, std::vector<std::string> names) {
  AbelianizationResult out;
  out.group = ck.group;
  out.gen_names = std::move(names);
  out.generator_images = ck.generator_images;
  out.moduli = ck.moduli;
  return out;
}

}  // namespace

AbelianizationResult abelianize_pc(const PcGroupPtr& g) {
  return from_cokernel(cokernel(pc_relation_matrix(*g)), g->names());
}

AbelianizationResult abelianize_amalgam(const AmalgamPtr& g) {
  return from_cokernel(cokernel(amalgam_relation_matrix(*g)), g->union_alphabet());
}

QuotientD quotient_D(const AmalgamPtr& g) {
  if (g->nfactors() != 2) throw PreconditionError("quotient_D expects a two-factor amalgam");
  const PcGroup& a = *g->factor(0);
  const PcGroup& b = *g->factor(1);
  const PcGroupPtr& c = g->c_group();
  const size_t na = a.ngens(), nb = b.ngens();

  // Quotient route: two independent cokernels A_ab/<c alpha>, B_ab/<c beta>.
  IntMatrix ma = pc_relation_matrix(a);
  for (size_t k = 0; k < c->ngens(); ++k) ma.append_row(g->embedding(0).apply(c->gen(k)).exps());
  IntMatrix mb = pc_relation_matrix(b);
  for (size_t k = 0; k < c->ngens(); ++k) mb.append_row(g->embedding(1).apply(c->gen(k)).exps());
  CokernelResult da = cokernel(ma), db = cokernel(mb);

  QuotientD out;
  out.d = abelian_direct_sum(da.group, db.group);

  // Presentation route: one stacked matrix over the union generators.
  IntMatrix stacked(0, na + nb);
  auto pad_row = [&](const std::vector<Int>& row, size_t offset) {
    std::vector<Int> padded(na + nb, Int(0));
    for (size_t k = 0; k < row.size(); ++k) padded[offset + k] = row[k];
    return padded;
  };
  for (size_t r = 0; r < ma.rows(); ++r) stacked.append_row(pad_row(ma.row(r), 0));
  for (size_t r = 0; r < mb.rows(); ++r) stacked.append_row(pad_row(mb.row(r), na));
  out.d_presentation = cokernel(stacked).group;
  out.routes_agree = out.d == out.d_presentation;

  // theta on the union generators: A-gens hit the D_A block, B-gens the D_B block.
  const size_t wa = da.moduli.size(), wb = db.moduli.size();
  out.moduli = da.moduli;
  out.moduli.insert(out.moduli.end(), db.moduli.begin(), db.moduli.end());
  for (size_t i = 0; i < na; ++i) {
    std::vector<Int> img(wa + wb, Int(0));
    for (size_t k = 0; k < wa; ++k) img[k] = da.generator_images[i][k];
    out.theta_images.push_back(std::move(img));
  }
  for (size_t i = 0; i < nb; ++i) {
    std::vector<Int> img(wa + wb, Int(0));
    for (size_t k = 0; k < wb; ++k) img[wa + k] = db.generator_images[i][k];
    out.theta_images.push_back(std::move(img));
  }

  // Every relation of G_ab maps to zero in D.
  IntMatrix gab = amalgam_relation_matrix(*g);
  out.relations_die = true;
  for (size_t r = 0; r < gab.rows(); ++r) {
    std::vector<Int> img(wa + wb, Int(0));
    for (size_t gidx = 0; gidx < na + nb; ++gidx)
      for (size_t k = 0; k < wa + wb; ++k) img[k] += gab.at(r, gidx) * out.theta_images[gidx][k];
    for (size_t k = 0; k < wa + wb; ++k) {
      if (out.moduli[k] != 0)
        out.relations_die &= (fmod(img[k], out.moduli[k]) == 0);
      else
        out.relations_die &= (img[k] == 0);
    }
  }

  // The generator images generate D: the cokernel of (images + D relations)
  // over the D coordinates must be trivial.
  IntMatrix gen_span(0, wa + wb);
  for (const auto& img : out.theta_images) gen_span.append_row(img);
  for (size_t k = 0; k < wa + wb; ++k) {
    if (out.moduli[k] == 0) continue;
    std::vector<Int> row(wa + wb, Int(0));
    row[k] = out.moduli[k];
    gen_span.append_row(row);
  }
  out.images_generate = cokernel(gen_span).group.trivial();
  return out;
}

bool is_perfect(const AmalgamPtr& g) { return abelianize_amalgam(g).group.trivial(); }

bool frattini_consequence_check(const PcGroupPtr& a, const PcSubgroup& c) {
  if (c.ambient() != a)
    throw PreconditionError("frattini check: subgroup of a different group");
  Int index = c.index_in_ambient();
  if (index == 1) throw PreconditionError("frattini check requires C proper in A");
  // A / gp(C, [A,A]) is the cokernel of the pc relations plus the rows of C.
  IntMatrix m = pc_relation_matrix(*a);
  for (const auto& h : c.igs()) m.append_row(h.exps());
  return !cokernel(m).group.trivial();
}

bool abelianization_infinite(const AmalgamPtr& g) {
  return abelianize_amalgam(g).group.free_rank > 0;
}

AbelianizationHom abelianization_hom(const AmalgamPtr& g) {
  AbelianizationResult ab = abelianize_amalgam(g);
  PcData d;
  size_t idx = 0;
  for (const auto& t : ab.group.torsion) {
    d.names.push_back("t" + std::to_string(++idx));
    d.orders.push_back(t);
  }
  for (size_t i = 0; i < ab.group.free_rank; ++i) {
    d.names.push_back("f" + std::to_string(i + 1));
    d.orders.push_back(0);
  }
  d.declared_class = 1;
  PcGroupPtr cod = PcGroup::build(std::move(d));

  std::vector<PcHom> factor_homs;
  size_t offset = 0;
  for (size_t f = 0; f < g->nfactors(); ++f) {
    std::vector<PcElement> images;
    for (size_t i = 0; i < g->factor(f)->ngens(); ++i)
      images.push_back(cod->element(ab.generator_images[offset + i]));
    factor_homs.emplace_back(g->factor(f), cod, std::move(images));
    offset += g->factor(f)->ngens();
  }
  return {ab.group, cod, ExtendedHom(g, cod, std::move(factor_homs))};
}

}  // namespace rsolv
