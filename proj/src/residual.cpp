#include "rsolv/residual.hpp"

#include <functional>
#include <sstream>

namespace rsolv {

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Central: return "central";
    case Strategy::Cyclic: return "cyclic";
    case Strategy::Double: return "double";
    case Strategy::AbelianFactor: return "abelian-factor";
    case Strategy::FiniteIndex: return "finite-index";
    case Strategy::PolyRS: return "poly-rs";
  }
  return "?";
}

WitnessImage SolvabilityWitness::map(const AmalgamElement& w) const {
  AmalgamElement cur = w;
  for (const auto& stage : stages) {
    if (stage.to_amalgam) {
      cur = stage.to_amalgam->apply(cur);
      continue;
    }
    if (stage.to_pc) {
      PcElement img = stage.to_pc->apply(cur);
      return {!img.is_identity(), img.str()};
    }
    if (stage.to_completion) {
      RatElement img = stage.to_completion->apply(cur);
      return {!img.is_identity(), img.str()};
    }
  }
  return {!cur.is_identity(), cur.str()};
}

bool SolvabilityWitness::reverify() const {
  for (const auto& stage : stages) {
    if (stage.to_amalgam && !stage.to_amalgam->reverify()) return false;
    if (stage.to_pc && !stage.to_pc->reverify()) return false;
    if (stage.to_completion && !stage.to_completion->reverify()) return false;
  }
  for (const auto& fact : kernel_facts) {
    if (fact.stage >= stages.size()) return false;
    const ChainStage& st = stages[fact.stage];
    if (fact.kind == "kernel-misses-factors") {
      if (!st.to_pc || !kernel_misses_factors(*st.to_pc).holds) return false;
    } else if (fact.kind == "kernel-misses-amalgam") {
      if (!st.to_pc || !kernel_misses_amalgam(*st.to_pc).holds) return false;
    } else if (fact.kind == "kernel-misses-factors-rational") {
      if (!st.to_completion) return false;
      for (size_t f = 0; f < st.to_completion->factor_homs().size(); ++f)
        if (!rational_injectivity_certificate(st.to_completion->factor_homs()[f],
                                              "factor " + std::to_string(f + 1))
                 .preserved())
          return false;
    } else if (fact.kind != "kernel-structure") {
      return false;
    }
  }
  return true;
}

// ------------------------------------------------------------ cyclic_witness

SolvabilityWitness cyclic_witness(const AmalgamPtr& g, const PcElement& a, const PcElement& b) {
  if (g->nfactors() != 2) throw PreconditionError("cyclic witness expects a two-factor amalgam");
  if (g->c_group()->ngens() != 1)
    throw PreconditionError("cyclic witness: the amalgamated subgroup is not cyclic (induced "
                            "sequence length " + std::to_string(g->c_group()->ngens()) + ")");
  if (a.is_identity() || b.is_identity())
    throw PreconditionError("cyclic witness: the chosen generators must be nonidentity");
  if (a.group() != g->factor(0) || b.group() != g->factor(1))
    throw PreconditionError("cyclic witness: a must lie in the first factor, b in the second");
  if (!PcSubgroup::generated(g->factor(0), {a}).same_subgroup(g->image_subgroup(0)) ||
      !PcSubgroup::generated(g->factor(1), {b}).same_subgroup(g->image_subgroup(1)))
    throw PreconditionError("cyclic witness: C is not gp(a) = gp(b) under the identification");

  // a in xi_{m+1} \ xi_m: quotient by xi_m makes the image central.
  auto pick_level = [](const PcGroupPtr& f, const PcElement& x) {
    SeriesChain ucs = series(f, SeriesKind::UpperCentral);
    for (size_t i = 1; i < ucs.terms.size(); ++i)
      if (ucs.terms[i].contains(x)) return std::pair<int, PcSubgroup>(static_cast<int>(i) - 1,
                                                                      ucs.terms[i - 1]);
    throw std::logic_error("upper central series did not absorb the element");
  };
  auto [m, xim] = pick_level(g->factor(0), a);
  auto [n, xin] = pick_level(g->factor(1), b);
  QuotientResult qa = quotient(g->factor(0), xim);
  QuotientResult qb = quotient(g->factor(1), xin);
  PcElement abar = qa.projection.apply(a);
  PcElement bbar = qb.projection.apply(b);

  std::vector<std::string> checks;
  checks.push_back("a lies in xi_" + std::to_string(m + 1) + " \\ xi_" + std::to_string(m) +
                   " of the first factor");
  checks.push_back("b lies in xi_" + std::to_string(n + 1) + " \\ xi_" + std::to_string(n) +
                   " of the second factor");
  for (size_t k = 0; k < qa.group->ngens(); ++k)
    if (!comm(abar, qa.group->gen(k)).is_identity())
      throw std::logic_error("image of a is not central in A/xi_m");
  for (size_t k = 0; k < qb.group->ngens(); ++k)
    if (!comm(bbar, qb.group->gen(k)).is_identity())
      throw std::logic_error("image of b is not central in B/xi_n");
  checks.push_back("the images of a and b are central in the quotient factors");
  if (element_order(abar) != 0 || element_order(bbar) != 0)
    throw std::logic_error("image of the amalgamated generator has finite order");
  checks.push_back("the images of a and b have infinite order (torsion-free layer)");

  Presentation cz_pres;
  cz_pres.name = "C";
  cz_pres.gens = {"z"};
  cz_pres.orders = {Int(0)};
  cz_pres.declared_class = 1;
  PcGroupPtr cz = PcGroup::build(cz_pres);
  CentralProduct cp = central_product({qa.group, qb.group}, cz,
                                      {PcHom(cz, qa.group, {abar}), PcHom(cz, qb.group, {bbar})});
  ExtendedHom h(g, cp.result,
                {qa.projection.compose(cp.canonical_maps[0]),
                 qb.projection.compose(cp.canonical_maps[1])});
  KernelFacts kc = kernel_misses_amalgam(h);
  if (!kc.holds) throw std::logic_error("cyclic witness: kernel meets the amalgamated subgroup");
  checks.push_back("D is the central product of A/xi_m and B/xi_n amalgamating the images");

  SolvabilityWitness out;
  out.strategy = Strategy::Cyclic;
  out.amalgam = g;
  out.stages.push_back(
      {"G -> D, the central product of the upper-central quotients", {}, h, {}, checks});
  out.kernel_facts.push_back(
      {0, "kernel-misses-amalgam",
       "the kernel misses C, so it is a free product of conjugates of factor subgroups with a "
       "free group; D is nilpotent, hence G is residually solvable",
       kc.certificates,
       {}});
  out.conclusion =
      "(free product of factor-subgroup conjugates with a free group)-by-nilpotent; residually "
      "solvable";
  out.solvable_derived_length = derived_length(cp.result);
  return out;
}

// ----------------------------------------------------------- central_witness

SolvabilityWitness central_witness(const AmalgamPtr& g) {
  const PcGroupPtr& c = g->c_group();
  for (size_t f = 0; f < g->nfactors(); ++f)
    for (size_t k = 0; k < c->ngens(); ++k) {
      PcElement img = g->embedding(f).apply(c->gen(k));
      for (size_t m = 0; m < g->factor(f)->ngens(); ++m)
        if (!comm(img, g->factor(f)->gen(m)).is_identity())
          throw PreconditionError("C is not central in factor " + g->factor_name(f) + ": [" +
                                  c->name(k) + ", " + g->factor(f)->name(m) + "] != 1");
    }

  std::vector<PcGroupPtr> factors;
  std::vector<PcHom> phis;
  for (size_t f = 0; f < g->nfactors(); ++f) {
    factors.push_back(g->factor(f));
    phis.push_back(g->embedding(f));
  }
  CentralProduct cp = central_product(factors, c, phis);
  std::vector<PcHom> factor_homs;
  for (size_t f = 0; f < g->nfactors(); ++f) factor_homs.push_back(cp.canonical_maps[f]);
  ExtendedHom h(g, cp.result, std::move(factor_homs));
  KernelFacts kf = kernel_misses_factors(h);
  if (!kf.holds) throw std::logic_error("central witness: a canonical map dropped rank");

  std::vector<std::string> checks;
  checks.push_back("every canonical map into the central product is injective");
  if (!central_product_identifications_hold(cp))
    throw std::logic_error("central product identifications failed");
  checks.push_back("the images of C coincide in the central product");
  int cls = central_product_class(cp);
  checks.push_back("the central product is nilpotent of class " + std::to_string(cls));

  SolvabilityWitness out;
  out.strategy = Strategy::Central;
  out.amalgam = g;
  out.stages.push_back({"G -> S, the generalized central product of the factors", {}, h, {},
                        checks});
  out.kernel_facts.push_back({0, "kernel-misses-factors",
                              "the kernel misses every factor, so it is free; S is nilpotent",
                              kf.certificates,
                              {}});
  out.conclusion = cls <= 1 ? "free-by-abelian; residually solvable"
                            : "free-by-nilpotent; residually solvable";
  out.solvable_derived_length = derived_length(cp.result);
  return out;
}

// ------------------------------------------------------------ double_witness

SolvabilityWitness double_witness(const Double& d) {
  KernelFacts kf = kernel_misses_factors(d.retraction);
  if (!kf.holds) throw std::logic_error("double witness: retraction dropped rank on a factor");
  SolvabilityWitness out;
  out.strategy = Strategy::Double;
  out.amalgam = d.amalgam;
  out.stages.push_back({"psi: the retraction of the double onto its base factor", {},
                        d.retraction, {},
                        {"psi restricted to each factor is injective",
                         "psi(a (a phi)^-1) = 1 for the defining kernel generators"}});
  out.kernel_facts.push_back({0, "kernel-misses-factors",
                              "the kernel misses every factor, so it is free; the base factor is "
                              "nilpotent",
                              kf.certificates,
                              {}});
  out.conclusion = "free-by-nilpotent; residually solvable";
  out.solvable_derived_length = derived_length(d.retraction.codomain());
  return out;
}

// ---------------------------------------------------- abelian_factor_witness

SolvabilityWitness abelian_factor_witness(const AmalgamPtr& g) {
  if (g->nfactors() != 2)
    throw PreconditionError("abelian-factor witness expects a two-factor amalgam");
  size_t fa = 2;
  for (size_t f = 0; f < 2; ++f)
    if (nilpotency_class(g->factor(f)) <= 1) { fa = f; break; }
  if (fa == 2) throw PreconditionError("abelian-factor witness: no abelian factor");
  size_t fb = 1 - fa;
  const PcGroupPtr& a = g->factor(fa);
  for (size_t k = 0; k < a->ngens(); ++k)
    if (a->order(k) != 0)
      throw PreconditionError("abelian factor has torsion (obstruction: invariant " +
                              a->order(k).str() + " at generator " + a->name(k) +
                              "); no finite-index split is attempted");

  // C_A as a lattice; A1 = saturation-basis * diag + complement = C x H.
  const PcSubgroup& l = g->image_subgroup(fa);
  IntMatrix rows(0, a->ngens());
  for (const auto& h : l.igs()) rows.append_row(h.exps());
  SaturationSplit split = saturate_and_complement(rows);

  std::vector<PcElement> a1_gens;
  for (const auto& h : l.igs()) a1_gens.push_back(h);
  for (size_t r = 0; r < split.complement_basis.rows(); ++r)
    a1_gens.push_back(a->element(split.complement_basis.row(r)));
  PcSubgroup a1 = PcSubgroup::generated(a, a1_gens);
  Int index = a1.index_in_ambient();
  if (index == 0 || index != split.index)
    throw std::logic_error("abelian-factor witness: index mismatch against the lattice split");

  QuotientResult q = quotient(a, a1);
  std::vector<PcElement> trivial_images(g->factor(fb)->ngens(), q.group->identity());
  std::vector<PcHom> factor_homs(2, PcHom::identity(q.group));  // placeholder, replaced below
  factor_homs[fa] = q.projection;
  factor_homs[fb] = PcHom(g->factor(fb), q.group, trivial_images);
  ExtendedHom h(g, q.group, factor_homs);

  std::vector<std::string> checks;
  checks.push_back("A1 = C x H with H of rank " + std::to_string(split.complement_basis.rows()));
  checks.push_back("[A : A1] = " + index.str());
  checks.push_back("C lies in the kernel of A -> A/A1 (agreement with the trivial map on B)");
  // coset representatives a_i of A1 in A, for the recorded kernel structure
  std::vector<std::string> reps;
  {
    std::vector<Int> counter(q.group->ngens(), Int(0));
    bool done = false;
    while (!done && reps.size() < 64) {
      std::vector<Int> lift = counter;
      reps.push_back(a->element(lift).str());
      size_t p = 0;
      for (; p < counter.size(); ++p) {
        counter[p] += 1;
        Int ord = q.group->order(p) == 0 ? Int(1) : q.group->order(p);
        if (counter[p] < ord) break;
        counter[p] = 0;
      }
      done = (p == counter.size());
    }
  }
  std::string rep_list;
  for (size_t i = 0; i < reps.size(); ++i) rep_list += (i ? ", " : "") + reps[i];

  SolvabilityWitness out;
  out.strategy = Strategy::AbelianFactor;
  out.amalgam = g;
  out.stages.push_back({"G -> A/A1, the finite abelian quotient", {}, h, {}, checks});
  out.kernel_facts.push_back(
      {0, "kernel-structure",
       "K = gp_G(B, A1) = { prod_{i=1..[A:A1]} B^{a_i} * A1 ; C } with coset representatives " +
           rep_list + "; the conjugating representatives centralize C, so K is a generalized "
           "free product of doubles over C and is residually solvable",
       {},
       {}});
  out.conclusion = "residually solvable-by-abelian-by-finite abelian";
  out.solvable_derived_length = 1;
  return out;
}

// ------------------------------------------------------ finite_index_witness

SolvabilityWitness finite_index_witness(const AmalgamPtr& g) {
  if (g->nfactors() != 2)
    throw PreconditionError("finite-index witness expects a two-factor amalgam");
  for (size_t f = 0; f < 2; ++f) {
    if (!g->factor(f)->is_torsion_free())
      throw PreconditionError("finite-index witness requires torsion-free factors");
    if (nilpotency_class(g->factor(f)) > 2)
      throw PreconditionError("unsupported: factor " + g->factor_name(f) +
                              " has nilpotency class > 2 (the exact completion covers class <= 2 "
                              "only)");
  }
  size_t fa = 2;
  Int index = 0;
  for (size_t f = 0; f < 2; ++f) {
    Int idx = g->image_subgroup(f).index_in_ambient();
    if (idx != 0) { fa = f; index = idx; break; }
  }
  if (fa == 2)
    throw PreconditionError("the amalgamated subgroup has infinite index in both factors");
  size_t fb = 1 - fa;
  const PcGroupPtr& a = g->factor(fa);
  const PcGroupPtr& b = g->factor(fb);

  RatNilp2Ptr mb = RatNilp2::build(b);
  std::vector<RatElement> b_images;
  for (size_t i = 0; i < b->ngens(); ++i) b_images.push_back(mb->from_base(b->gen(i)));
  RatHom hb(b, mb, std::move(b_images));

  // h_A(g) = mu(c)^{1/n} for the least n with g^n in C_A.
  std::vector<RatElement> a_images;
  std::vector<std::string> checks;
  for (size_t i = 0; i < a->ngens(); ++i) {
    PcElement gi = a->gen(i);
    Int n = 0;
    PcElement pw = a->identity();
    for (Int k = 1; k <= index; ++k) {
      pw = pw.mul(gi);
      if (g->image_subgroup(fa).contains(pw)) { n = k; break; }
    }
    if (n == 0) throw std::logic_error("finite index violated: no power lands in C");
    PcElement c = preimage_element(g->embedding(fa), pw);
    RatElement target = mb->from_base(g->embedding(fb).apply(c));
    a_images.push_back(mb->root(target, n));
    checks.push_back(a->name(i) + "^" + n.str() + " lies in C; image extracted as an " + n.str() +
                     "-th root");
  }
  RatHom ha(a, mb, std::move(a_images));

  std::vector<RatHom> factor_homs(2, hb);
  factor_homs[fa] = ha;
  factor_homs[fb] = hb;
  RatExtendedHom ext(g, mb, factor_homs);
  checks.push_back("the completion extension agrees with the original embedding on C");

  RationalRankCertificate ca = rational_injectivity_certificate(ha, g->factor_name(fa));
  RationalRankCertificate cb = rational_injectivity_certificate(hb, g->factor_name(fb));
  if (!ca.preserved() || !cb.preserved())
    throw std::logic_error("finite-index witness: a rational rank certificate failed");

  Int denom = std::max(max_denominator(ha), max_denominator(hb));
  if (index % denom != 0)
    throw std::logic_error("finite-index witness: denominator does not divide the index");
  checks.push_back("all rational denominators divide the index " + index.str());
  checks.push_back("[" + g->factor_name(fa) + " : C] = " + index.str());

  SolvabilityWitness out;
  out.strategy = Strategy::FiniteIndex;
  out.amalgam = g;
  ChainStage stage;
  stage.label = "G -> m(B), the rational class-2 completion of the other factor";
  stage.to_completion = ext;
  stage.checks = checks;
  out.stages.push_back(std::move(stage));
  out.kernel_facts.push_back({0, "kernel-misses-factors-rational",
                              "the kernel misses both factors, so it is free; the completion is "
                              "torsion-free nilpotent of class <= 2",
                              {},
                              {ca, cb}});
  out.conclusion = "free-by-(torsion-free nilpotent of class <= 2); residually solvable";
  out.solvable_derived_length = nilpotency_class(b) >= 2 ? 2 : 1;
  return out;
}

// -------------------------------------------------------------- poly-rs

PolyRsReport polyrs_compatibility(const AmalgamPtr& g) {
  if (g->nfactors() != 2)
    throw PreconditionError("poly-rs compatibility expects a two-factor amalgam");
  SeriesChain ua = series(g->factor(0), SeriesKind::UpperCentral);
  SeriesChain ub = series(g->factor(1), SeriesKind::UpperCentral);
  size_t maxc = std::max(ua.terms.size(), ub.terms.size()) - 1;
  PolyRsReport out;
  for (size_t i = 1; i <= maxc; ++i) {
    const PcSubgroup& xa = ua.terms[std::min(i, ua.terms.size() - 1)];
    const PcSubgroup& xb = ub.terms[std::min(i, ub.terms.size() - 1)];
    PcSubgroup pa =
        preimage_subgroup(g->embedding(0), intersect_with_normal(g->image_subgroup(0), xa));
    PcSubgroup pb =
        preimage_subgroup(g->embedding(1), intersect_with_normal(g->image_subgroup(1), xb));
    bool ok = pa.same_subgroup(pb);
    std::ostringstream detail;
    detail << "xi_" << i << "(A) cap C_A pulls back to a subgroup of Hirsch length "
           << pa.hirsch_length() << "; xi_" << i << "(B) cap C_B pulls back to Hirsch length "
           << pb.hirsch_length() << (ok ? "; identified" : "; NOT identified");
    out.layers.push_back({static_cast<int>(i), ok, detail.str()});
    if (!ok && out.compatible) {
      out.compatible = false;
      out.failing_layer = static_cast<int>(i);
    }
  }
  return out;
}

SolvabilityWitness polyrs_tower(const AmalgamPtr& g) {
  PolyRsReport rep = polyrs_compatibility(g);
  if (!rep.compatible)
    throw PreconditionError("incompatible filtrations at layer i = " +
                            std::to_string(rep.failing_layer));

  SolvabilityWitness out;
  out.strategy = Strategy::PolyRS;
  out.amalgam = g;
  AmalgamPtr current = g;
  size_t guard = 0;
  while (nilpotency_class(current->factor(0)) > 1 || nilpotency_class(current->factor(1)) > 1) {
    if (++guard > 16) throw std::logic_error("poly-rs tower did not terminate");
    PcSubgroup za = center(current->factor(0));
    PcSubgroup zb = center(current->factor(1));
    QuotientResult qa = quotient(current->factor(0), za);
    QuotientResult qb = quotient(current->factor(1), zb);
    PcSubgroup pa = preimage_subgroup(current->embedding(0),
                                      intersect_with_normal(current->image_subgroup(0), za));
    PcSubgroup pb = preimage_subgroup(current->embedding(1),
                                      intersect_with_normal(current->image_subgroup(1), zb));
    if (!pa.same_subgroup(pb))
      throw PreconditionError("stage compatibility failed while building the tower");
    QuotientResult qc = quotient(current->c_group(), pa);

    auto stage_embedding = [&](size_t f, const QuotientResult& qf) {
      std::vector<PcElement> images;
      for (size_t k = 0; k < qc.group->ngens(); ++k)
        images.push_back(qf.projection.apply(current->embedding(f).apply(current->c_group()->gen(k))));
      PcHom emb(qc.group, qf.group, std::move(images));
      if (!emb.is_injective())
        throw std::logic_error("tower stage embedding is not injective");
      return emb;
    };
    AmalgamPtr next = Amalgam::build({qa.group, qb.group}, qc.group,
                                     {stage_embedding(0, qa), stage_embedding(1, qb)},
                                     {current->factor_name(0), current->factor_name(1)});
    std::vector<std::vector<AmalgamElement>> images(2);
    for (size_t k = 0; k < current->factor(0)->ngens(); ++k)
      images[0].push_back(next->from_factor(0, qa.projection.apply(current->factor(0)->gen(k))));
    for (size_t k = 0; k < current->factor(1)->ngens(); ++k)
      images[1].push_back(next->from_factor(1, qb.projection.apply(current->factor(1)->gen(k))));
    AmalgamHom stage_hom(current, next, std::move(images));

    ChainStage stage;
    stage.label = "stage " + std::to_string(out.stages.size() + 1) +
                  ": quotient both factors by their centre, C by the compatible intersection";
    stage.to_amalgam = stage_hom;
    stage.checks = {"the central intersections agree through the identification",
                    "both stage embeddings are injective",
                    "the stage hom maps every factor relation and the C-identification to "
                    "relations"};
    out.stages.push_back(std::move(stage));
    current = next;
  }

  // Base case: factors abelian, C central; the central product finishes it.
  SolvabilityWitness base = central_witness(current);
  size_t base_stage = out.stages.size();
  for (auto& st : base.stages) {
    st.label = "base: " + st.label;
    out.stages.push_back(st);
  }
  for (auto& kf : base.kernel_facts) {
    kf.stage += base_stage;
    out.kernel_facts.push_back(kf);
  }
  out.conclusion = "poly-residually solvable: a tower of " + std::to_string(base_stage) +
                   " verified central-layer stages ends in an abelian-factor amalgam, which is "
                   "free-by-abelian";
  out.solvable_derived_length = base.solvable_derived_length;
  return out;
}

// ----------------------------------------------------------- trap certificate

TrapCertificate trap_certificate(const AmalgamPtr& g, const std::string& element,
                                 const std::string& w, const std::string& u,
                                 const std::string& v) {
  TrapCertificate out;
  out.amalgam = g;
  out.element = element;
  out.w = w;
  out.u = u;
  out.v = v;

  AmalgamElement e = g->parse(element);
  if (e.is_identity()) {
    out.verified = true;
    out.degenerate = true;
    out.orientation = "as-stated";
    out.license = "degenerate: the element is the identity";
    return out;
  }
  AmalgamElement ew = g->parse(w), eu = g->parse(u), ev = g->parse(v);

  auto check = [&](bool inverted) {
    auto cnj = [&](const AmalgamElement& x, const AmalgamElement& by) {
      return inverted ? g->mul(g->mul(by, x), g->inv(by)) : g->conj(x, by);
    };
    AmalgamElement lhs = cnj(e, ew);
    AmalgamElement xu = cnj(e, eu), xv = cnj(e, ev);
    AmalgamElement rhs = g->comm_elems(xu, xv);
    return std::tuple<bool, AmalgamElement, AmalgamElement>(g->equal(lhs, rhs), lhs, rhs);
  };

  auto [ok, lhs, rhs] = check(false);
  if (ok) {
    out.verified = true;
    out.orientation = "as-stated";
  } else {
    auto [ok2, lhs2, rhs2] = check(true);
    if (ok2) {
      out.verified = true;
      out.orientation = "inverted";
    } else {
      out.lhs_nf = lhs.str() + " | inverted: " + lhs2.str();
      out.rhs_nf = rhs.str() + " | inverted: " + rhs2.str();
    }
  }
  if (out.verified)
    out.license =
        "element^w = [element^u, element^v] holds, so by induction the element lies in every "
        "term of the derived series: if it lies in delta_k then both conjugates do, hence it "
        "lies in [delta_k, delta_k] = delta_{k+1}. The element survives in no solvable "
        "quotient, so the amalgam is not residually solvable; its normal closure gp_G(element) "
        "is perfect, so the amalgam is not poly-residually solvable either.";
  return out;
}

// ----------------------------------------------------------------- separate

SeparateOutcome separate(const AmalgamTarget& t, const std::string& word, int max_derived_length,
                         bool deterministic) {
  (void)deterministic;  // strategies are always tried sequentially in a fixed order
  const AmalgamPtr& g = t.amalgam;
  AmalgamElement e = g->parse(word);
  if (e.is_identity()) throw PreconditionError("the word is trivial in the amalgam");

  SeparateOutcome out;
  auto attempt = [&](Strategy s, const std::function<SolvabilityWitness()>& build) {
    if (out.witness) return;
    std::string name = strategy_name(s);
    try {
      SolvabilityWitness w = build();
      if (w.solvable_derived_length > max_derived_length) {
        out.notes.push_back(name + ": solvable quotient has derived length " +
                            std::to_string(w.solvable_derived_length) + " > bound " +
                            std::to_string(max_derived_length));
        return;
      }
      WitnessImage img = w.map(e);
      if (img.nonidentity) {
        out.notes.push_back(name + ": separated; image " + img.description);
        out.witness = std::move(w);
      } else {
        out.notes.push_back(name + ": the image of the element is the identity");
      }
    } catch (const PreconditionError& ex) {
      out.notes.push_back(name + ": not applicable (" + std::string(ex.what()) + ")");
    }
  };

  attempt(Strategy::Central, [&] { return central_witness(g); });
  attempt(Strategy::Cyclic, [&] {
    if (g->c_group()->ngens() != 1)
      throw PreconditionError("the amalgamated subgroup is not cyclic");
    return cyclic_witness(g, g->embedding(0).apply(g->c_group()->gen(0)),
                          g->embedding(1).apply(g->c_group()->gen(0)));
  });
  attempt(Strategy::Double, [&] {
    if (!t.double_info) throw PreconditionError("the amalgam was not built as a double");
    return double_witness(*t.double_info);
  });
  attempt(Strategy::AbelianFactor, [&] { return abelian_factor_witness(g); });
  attempt(Strategy::FiniteIndex, [&] { return finite_index_witness(g); });
  attempt(Strategy::PolyRS, [&] { return polyrs_tower(g); });
  return out;
}

// ------------------------------------------------------------- sign checking

SignCheck squared_conjugation_sign_check(const AmalgamPtr& g, const std::string& a,
                                         const std::string& x, const std::string& b, int range) {
  SignCheck out;
  AmalgamElement ea = g->parse(a), ex = g->parse(x), eb = g->parse(b);
  auto holds = [&](int eps) {
    for (int i = -range; i <= range; ++i) {
      AmalgamElement lhs = g->pow(g->conj(ea, g->pow(ex, i)), 2);
      AmalgamElement rhs = g->mul(g->pow(ea, 2), g->pow(eb, Int(eps) * i));
      if (!g->equal(lhs, rhs)) return false;
    }
    return true;
  };
  bool plus = holds(+1), minus = holds(-1);
  if (plus == minus) {
    out.consistent = plus;  // both only in degenerate situations
    out.epsilon = plus ? 0 : 0;
    out.details.push_back(plus ? "both signs hold (degenerate)" : "no consistent sign");
    return out;
  }
  out.consistent = true;
  out.epsilon = plus ? 1 : -1;
  for (int i = -range; i <= range; ++i)
    out.details.push_back("(" + a + "^(" + x + "^" + std::to_string(i) + "))^2 = " + a + "^2 * " +
                          b + "^(" + std::to_string(out.epsilon) + " * " + std::to_string(i) +
                          ") verified");
  return out;
}

}  // namespace rsolv
