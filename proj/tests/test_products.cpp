#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rsolv/abelianization.hpp"
#include "rsolv/central_product.hpp"

using namespace rsolv;

static PcGroupPtr heisenberg() {
  return PcGroup::build(
      parse_presentation_text("group H { gens: a, b, c; rels: [b,a] = c; class: 2 }"));
}

static AmalgamPtr z_amalgam() {
  auto za = PcGroup::build(parse_presentation_text("group ZA { gens: a; class: 1 }"));
  auto zb = PcGroup::build(parse_presentation_text("group ZB { gens: b; class: 1 }"));
  return Amalgam::identify(za, {za->parse("a^2")}, zb, {zb->parse("b^3")}, {"A", "B"});
}

static AmalgamPtr counterexample_amalgam() {
  auto a = PcGroup::build(
      parse_presentation_text("group A { gens: a, x, t; rels: [x,a] = t; class: 2 }"));
  auto b = PcGroup::build(parse_presentation_text(
      "group B { gens: b, y, c, d, e; rels: [y,b] = c, [c,b] = d, [c,y] = e; class: 3 }"));
  return Amalgam::identify(a, {a->parse("a"), a->parse("a^x")}, b,
                           {b->parse("b"), b->parse("[b,b^y]")}, {"A", "B"});
}

// Central product of k Heisenberg copies over the common center.
static CentralProduct heis_central_product(size_t k) {
  auto h = heisenberg();
  auto c = PcGroup::build(parse_presentation_text("group C { gens: z; class: 1 }"));
  std::vector<PcGroupPtr> factors;
  std::vector<PcHom> phis;
  for (size_t i = 0; i < k; ++i) {
    PcGroupPtr f = k == 1 ? h : h->renamed_copy("_" + std::to_string(i + 1));
    phis.emplace_back(c, f, std::vector<PcElement>{f->gen(2)});
    factors.push_back(f);
  }
  return central_product(factors, c, phis);
}

TEST_CASE("two Heisenberg factors over the common center") {
  CentralProduct cp = heis_central_product(2);
  CHECK(cp.result->hirsch_length() == 5);  // 3 + 3 - 1
  CHECK(central_product_class(cp) == 2);
  for (size_t i = 0; i < 2; ++i) {
    FactorEmbeddingCheck chk = verify_factor_embedding(cp, i);
    CHECK(chk.ok);
    CHECK(chk.certificate.domain_hirsch == 3);
    CHECK(chk.certificate.image_hirsch == 3);
  }
  CHECK(central_product_identifications_hold(cp));
  CHECK(central_product_intersections_are_c(cp));
  CHECK(central_product_generates(cp));
}

TEST_CASE("three Heisenberg factors over the common center") {
  CentralProduct cp = heis_central_product(3);
  CHECK(cp.result->hirsch_length() == 7);  // 3*3 - 2 identifications
  CHECK(central_product_class(cp) == 2);
  for (size_t i = 0; i < 3; ++i) CHECK(verify_factor_embedding(cp, i).ok);
  CHECK(central_product_identifications_hold(cp));
  CHECK(central_product_intersections_are_c(cp));
  CHECK(central_product_generates(cp));
}

TEST_CASE("trivial C gives the direct product") {
  auto h = heisenberg();
  auto c0 = PcGroup::build(PcData{{}, {}, {}, {}, 1});
  std::vector<PcGroupPtr> factors{h->renamed_copy("_1"), h->renamed_copy("_2")};
  std::vector<PcHom> phis{PcHom(c0, factors[0], {}), PcHom(c0, factors[1], {})};
  CentralProduct cp = central_product(factors, c0, phis);
  CHECK(cp.result->hirsch_length() == 6);
  CHECK(central_product_class(cp) == 2);
}

TEST_CASE("abelian factors give an abelian central product") {
  auto z2 = PcGroup::build(parse_presentation_text("group Z2 { gens: p, q; class: 1 }"));
  auto c = PcGroup::build(parse_presentation_text("group C { gens: z; class: 1 }"));
  std::vector<PcGroupPtr> factors{z2->renamed_copy("_1"), z2->renamed_copy("_2")};
  std::vector<PcHom> phis{PcHom(c, factors[0], {factors[0]->gen(0)}),
                          PcHom(c, factors[1], {factors[1]->gen(0)})};
  CentralProduct cp = central_product(factors, c, phis);
  CHECK(central_product_class(cp) == 1);
  CHECK(cp.result->hirsch_length() == 3);
}

TEST_CASE("single factor central product is the factor") {
  CentralProduct cp = heis_central_product(1);
  CHECK(cp.result->hirsch_length() == 3);
  CHECK(verify_factor_embedding(cp, 0).ok);
}

TEST_CASE("non-central image is rejected with the offending commutator") {
  auto h = heisenberg();
  auto c = PcGroup::build(parse_presentation_text("group C { gens: z; class: 1 }"));
  try {
    central_product({h}, c, {PcHom(c, h, {h->gen(0)})});  // a is not central
    FAIL("non-central map accepted");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("not central") != std::string::npos);
  }
}

// --------------------------------------------------------------- abelianize

TEST_CASE("abelianization of pc groups") {
  CHECK(abelianize_pc(heisenberg()).group == AbelianGroup{{}, 2});
  auto z3 = PcGroup::build(parse_presentation_text("group Z3 { gens: a, b, c; class: 1 }"));
  CHECK(abelianize_pc(z3).group == AbelianGroup{{}, 3});
  auto f = PcGroup::build(parse_presentation_text(
      "group F { gens: x, y, c, d, e; rels: [y,x] = c, [c,x] = d, [c,y] = e; class: 3 }"));
  CHECK(abelianize_pc(f).group == AbelianGroup{{}, 2});
}

TEST_CASE("abelianization of the a^2=b^3 amalgam is Z with a -> 3, b -> 2") {
  AbelianizationResult ab = abelianize_amalgam(z_amalgam());
  CHECK(ab.group == AbelianGroup{{}, 1});
  const Int& ia = ab.generator_images[0][0];
  const Int& ib = ab.generator_images[1][0];
  CHECK(ia != 0);
  CHECK(2 * ia == 3 * ib);  // basis-independent shape of (3, 2)
}

TEST_CASE("free product case: trivial C gives A_ab x B_ab") {
  auto h = heisenberg();
  auto c0 = PcGroup::build(PcData{{}, {}, {}, {}, 1});
  auto a = h->renamed_copy("_1");
  auto b = h->renamed_copy("_2");
  AmalgamPtr g = Amalgam::build({a, b}, c0, {PcHom(c0, a, {}), PcHom(c0, b, {})});
  CHECK(abelianize_amalgam(g).group == AbelianGroup{{}, 4});
  QuotientD qd = quotient_D(g);
  CHECK(qd.verified());
  CHECK(qd.d == AbelianGroup{{}, 4});  // theta is an isomorphism here
}

TEST_CASE("quotient_D of the a^2=b^3 amalgam is Z/6 by both routes") {
  QuotientD qd = quotient_D(z_amalgam());
  CHECK(qd.d == AbelianGroup{{6}, 0});
  CHECK(qd.routes_agree);
  CHECK(qd.relations_die);
  CHECK(qd.images_generate);
}

TEST_CASE("the counterexample amalgam: abelianization and D are nontrivial") {
  auto g = counterexample_amalgam();
  AbelianizationResult ab = abelianize_amalgam(g);
  CHECK(ab.group == AbelianGroup{{}, 2});  // a and b die, x and y survive
  // the image of a is zero in every abelian quotient
  CHECK(ab.generator_images[0] == std::vector<Int>{Int(0), Int(0)});
  QuotientD qd = quotient_D(g);
  CHECK(qd.verified());
  CHECK_FALSE(qd.d.trivial());
  CHECK_FALSE(is_perfect(g));
  CHECK(abelianization_infinite(g));
}

TEST_CASE("frattini consequence check") {
  auto h = heisenberg();
  CHECK(frattini_consequence_check(h, PcSubgroup::generated(h, {h->parse("c")})));
  CHECK(frattini_consequence_check(h, PcSubgroup::generated(h, {h->parse("a"), h->parse("c")})));
  CHECK_THROWS_AS(frattini_consequence_check(h, whole_group(h)), PreconditionError);
}

TEST_CASE("abelianization_infinite is false for a finite cokernel instance") {
  auto t4 = PcGroup::build(parse_presentation_text("group T4 { gens: p; orders: p=4; class: 1 }"));
  auto t6 = PcGroup::build(parse_presentation_text("group T6 { gens: q; orders: q=6; class: 1 }"));
  AmalgamPtr g = Amalgam::identify(t4, {t4->parse("p^2")}, t6, {t6->parse("q^3")});
  CHECK_FALSE(abelianization_infinite(g));
  CHECK_FALSE(is_perfect(g));  // Z/12 is nontrivial
  CHECK(abelianize_amalgam(g).group == AbelianGroup{{12}, 0});
}

TEST_CASE("abelianization hom: a verified extended hom onto the abelianization") {
  auto g = z_amalgam();
  AbelianizationHom ah = abelianization_hom(g);
  CHECK(ah.group == AbelianGroup{{}, 1});
  CHECK(ah.hom.reverify());
  CHECK(ah.hom.apply(g->parse("a^2*b^-3")).is_identity());
  CHECK_FALSE(ah.hom.apply(g->parse("a")).is_identity());
  CHECK_FALSE(ah.hom.apply(g->parse("b")).is_identity());

  auto gn = counterexample_amalgam();
  AbelianizationHom ahn = abelianization_hom(gn);
  CHECK(ahn.hom.reverify());
  CHECK(ahn.hom.apply(gn->parse("a")).is_identity());   // a dies
  CHECK_FALSE(ahn.hom.apply(gn->parse("x")).is_identity());
}

TEST_CASE("is_perfect on standard configurations") {
  CHECK_FALSE(is_perfect(z_amalgam()));
  auto h = heisenberg();
  Double d = make_double(h, PcSubgroup::generated(h, {h->parse("c")}));
  CHECK_FALSE(is_perfect(d.amalgam));
  CHECK(abelianization_infinite(d.amalgam));
}

TEST_CASE("a corrupted central product fails the factor-embedding certificate") {
  auto h = heisenberg();
  auto c = PcGroup::build(parse_presentation_text("group C { gens: z; class: 1 }"));
  std::vector<PcGroupPtr> factors{h->renamed_copy("_1"), h->renamed_copy("_2")};
  std::vector<PcHom> phis{PcHom(c, factors[0], {factors[0]->gen(2)}),
                          PcHom(c, factors[1], {factors[1]->gen(2)})};
  // quotient additionally by a non-central element of factor 1: rank drops
  CentralProduct cp;
  cp.factors = factors;
  cp.c = c;
  cp.central_maps = phis;
  cp.product = direct_product(factors);
  std::vector<PcHom> iota{product_embedding(factors, cp.product, 0),
                          product_embedding(factors, cp.product, 1)};
  std::vector<PcElement> ngens{
      iota[0].apply(phis[0].apply(c->gen(0))).mul(iota[1].apply(phis[1].apply(c->gen(0))).inv()),
      iota[0].apply(factors[0]->gen(0))};  // the corruption: a_1 dies too
  QuotientResult q =
      quotient(cp.product, PcSubgroup::generated(cp.product, ngens, /*normal_closure=*/true));
  cp.result = q.group;
  cp.projection = q.projection;
  cp.canonical_maps = {iota[0].compose(q.projection), iota[1].compose(q.projection)};
  FactorEmbeddingCheck chk = verify_factor_embedding(cp, 0);
  CHECK_FALSE(chk.ok);  // factor 1 lost its a-generator: rank drop
  CHECK(chk.certificate.image_hirsch < chk.certificate.domain_hirsch);
}

TEST_CASE("is_perfect is false for {Z * Z; a = b}") {
  auto za = PcGroup::build(parse_presentation_text("group ZA { gens: a; class: 1 }"));
  auto zb = PcGroup::build(parse_presentation_text("group ZB { gens: b; class: 1 }"));
  AmalgamPtr g = Amalgam::identify(za, {za->parse("a")}, zb, {zb->parse("b")});
  CHECK_FALSE(is_perfect(g));
  CHECK(abelianize_amalgam(g).group == AbelianGroup{{}, 1});
}
