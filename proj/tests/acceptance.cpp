// Acceptance suite: twelve exact (zero-tolerance) criteria, one pass/fail
// line each. Every expected value is integer-exact; the only bounds are the
// stated wall-clock limits.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>

#include "oracles.hpp"
#include "rsolv/workspace.hpp"

using namespace rsolv;

namespace {

int failures = 0;

void criterion(int number, const std::string& title, double time_limit_s,
               const std::function<void()>& body) {
  auto start = std::chrono::steady_clock::now();
  std::string error;
  try {
    body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = error.empty() && (time_limit_s <= 0 || elapsed <= time_limit_s);
  if (!ok) ++failures;
  std::printf("%s %2d: %s (%.2fs%s)\n", ok ? "PASS" : "FAIL", number, title.c_str(), elapsed,
              time_limit_s > 0 ? (" / limit " + std::to_string(time_limit_s) + "s").c_str() : "");
  if (!error.empty()) std::printf("         %s\n", error.c_str());
}

void require(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error("check failed: " + what);
}

PcGroupPtr heisenberg() {
  return PcGroup::build(
      parse_presentation_text("group H { gens: a, b, c; rels: [b,a] = c; class: 2 }"));
}

oracles::Mat3 heis_matrix(const PcElement& x) {
  using oracles::Mat3;
  static const Mat3 ma = Mat3::elementary(0, 1, 1);
  static const Mat3 mb = Mat3::elementary(1, 2, 1);
  static const Mat3 mc = mb.inverse().mul(ma.inverse()).mul(mb).mul(ma);
  return ma.pow(x.exps()[0]).mul(mb.pow(x.exps()[1])).mul(mc.pow(x.exps()[2]));
}

// The ten two-factor amalgams of nilpotent pc factors with C proper on both
// sides used by criteria 4 and 5.
std::vector<std::pair<std::string, AmalgamPtr>> ten_amalgams() {
  std::vector<std::pair<std::string, AmalgamPtr>> out;
  auto h = heisenberg();
  auto h2 = h->renamed_copy("_2");

  out.emplace_back("builtin:nil-neg", Workspace::builtin("nil-neg").find_amalgam("G")->amalgam);
  out.emplace_back("builtin:example-8-1",
                   Workspace::builtin("example-8-1").find_amalgam("G")->amalgam);
  out.emplace_back("Heisenberg double over the center",
                   Workspace::builtin("heis-double").find_amalgam("G")->amalgam);
  out.emplace_back("{H * H; a = a'}",
                   Amalgam::identify(h, {h->parse("a")}, h2, {h2->parse("a_2")}, {"A", "B"}));
  {
    auto za = PcGroup::build(parse_presentation_text("group ZA { gens: a; class: 1 }"));
    auto zb = PcGroup::build(parse_presentation_text("group ZB { gens: b; class: 1 }"));
    out.emplace_back("{Z * Z; a^2 = b^3}",
                     Amalgam::identify(za, {za->parse("a^2")}, zb, {zb->parse("b^3")},
                                       {"A", "B"}));
  }
  {
    auto z2 = PcGroup::build(parse_presentation_text("group P { gens: p, q; class: 1 }"));
    auto z2b = z2->renamed_copy("_2");
    out.emplace_back("{Z^2 * Z^2; p = p'}",
                     Amalgam::identify(z2, {z2->parse("p")}, z2b, {z2b->parse("p_2")},
                                       {"A", "B"}));
  }
  out.emplace_back(
      "{H * H; gp(a^2, b, c)} of index 2",
      Amalgam::identify(h, {h->parse("a^2"), h->parse("b"), h->parse("c")}, h2,
                        {h2->parse("a_2^2"), h2->parse("b_2"), h2->parse("c_2")}, {"A", "B"}));
  {
    auto z = PcGroup::build(parse_presentation_text("group Z { gens: t; class: 1 }"));
    out.emplace_back("{H * Z; c = t^2}",
                     Amalgam::identify(h, {h->parse("c")}, z, {z->parse("t^2")}, {"A", "B"}));
  }
  {
    auto f = PcGroup::build(parse_presentation_text(
        "group F { gens: x, y, c, d, e; rels: [y,x] = c, [c,x] = d, [c,y] = e; class: 3 }"));
    auto hh = h->renamed_copy("_3");
    out.emplace_back("{F32 * H; d = c}",
                     Amalgam::identify(f, {f->parse("d")}, hh, {hh->parse("c_3")}, {"A", "B"}));
  }
  {
    auto z2 = PcGroup::build(parse_presentation_text("group P { gens: p, q; class: 1 }"));
    auto hh = h->renamed_copy("_4");
    out.emplace_back(
        "{Z^2 * H; gp(p^2, q) = gp(a, c)}",
        Amalgam::identify(z2, {z2->parse("p^2"), z2->parse("q")}, hh,
                          {hh->parse("a_4"), hh->parse("c_4")}, {"A", "B"}));
  }
  return out;
}

}  // namespace

int main() {
  std::printf("rsolv acceptance suite (exact integer checks)\n");
  std::printf("---------------------------------------------\n");

  criterion(1, "collection vs the unitriangular matrix oracle on 1000 word pairs", 5.0, [] {
    auto h = heisenberg();
    std::mt19937_64 rng(10001);
    std::uniform_int_distribution<int> pg(0, 2), pe(-4, 4), len(1, 6);
    auto random_word = [&] {
      std::vector<Syllable> raw;
      int l = len(rng);
      for (int i = 0; i < l; ++i) raw.push_back({pg(rng), Int(pe(rng))});
      return free_reduce(raw);
    };
    for (int t = 0; t < 1000; ++t) {
      Word u = random_word(), v = random_word();
      PcElement xu = h->collect_word(u), xv = h->collect_word(v);
      PcElement prod = h->collect_word(word_mul(u, v));
      require(prod == xu.mul(xv), "collect is a homomorphism");
      require(heis_matrix(prod) == heis_matrix(xu).mul(heis_matrix(xv)),
              "matrix representation agrees with collect-multiply");
    }
  });

  criterion(2, "consistency gate accepts the builtins, rejects a corrupted tail", 1.0, [] {
    require(Workspace::builtin("heisenberg").find_group("H") != nullptr, "Heisenberg builds");
    require(Workspace::builtin("freenilp-3-2").find_group("F") != nullptr,
            "free nilpotent class 3 rank 2 builds");
    bool rejected = false;
    try {
      // (Heisenberg on x,y,c) x Z<z> x Z<d> with the tail of [c,z] corrupted to d
      PcGroup::build(parse_presentation_text(
          "group BAD { gens: x, y, z, c, d; rels: [y,x] = c, [c,z] = d; class: 3 }"));
    } catch (const ConsistencyError& e) {
      std::string msg = e.what();
      rejected = msg.find("triple") != std::string::npos &&
                 msg.find("(x, y, z)") != std::string::npos;
    }
    require(rejected, "corrupted presentation rejected naming the violating triple");
  });

  criterion(3, "SNF vs the elementary-operations oracle on 500 random matrices", 10.0, [] {
    std::mt19937_64 rng(10003);
    std::uniform_int_distribution<size_t> dim(1, 6);
    std::uniform_int_distribution<int> val(-9, 9);
    for (int t = 0; t < 500; ++t) {
      IntMatrix m(dim(rng), dim(rng));
      for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c) m.at(r, c) = val(rng);
      SnfResult snf = smith_normal_form(m);
      require(snf.u.mul(m).mul(snf.v) == snf.s, "U*M*V = S exactly");
      require(iabs(snf.u.det()) == 1 && iabs(snf.v.det()) == 1, "U and V unimodular");
      std::vector<Int> inv;
      for (size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
        if (snf.s.at(i, i) != 0) inv.push_back(snf.s.at(i, i));
      require(inv == oracles::snf_invariants_oracle(oracles::to_grid(m)),
              "invariant factors match the oracle");
    }
  });

  criterion(4, "non-perfectness of ten amalgams with proper C on both sides", 5.0, [] {
    for (const auto& [name, g] : ten_amalgams()) {
      require(!is_perfect(g), name + ": not perfect");
      for (size_t f = 0; f < 2; ++f)
        require(frattini_consequence_check(g->factor(f), g->image_subgroup(f)),
                name + ": Frattini consequence on factor " + std::to_string(f + 1));
    }
  });

  criterion(5, "the epimorphism onto D: theta verified, both routes agree", 0, [] {
    for (const auto& [name, g] : ten_amalgams()) {
      QuotientD qd = quotient_D(g);
      require(qd.relations_die, name + ": all relations of G_ab die in D");
      require(qd.images_generate, name + ": generator images generate D");
      require(qd.routes_agree, name + ": quotient and presentation routes agree");
    }
  });

  criterion(6, "central products of 2 and 3 Heisenberg copies over the center", 0, [] {
    auto h = heisenberg();
    for (size_t k : {2u, 3u}) {
      auto c = PcGroup::build(parse_presentation_text("group C { gens: z; class: 1 }"));
      std::vector<PcGroupPtr> factors;
      std::vector<PcHom> phis;
      for (size_t i = 0; i < k; ++i) {
        PcGroupPtr f = h->renamed_copy("_" + std::to_string(i + 1));
        phis.emplace_back(c, f, std::vector<PcElement>{f->gen(2)});
        factors.push_back(f);
      }
      CentralProduct cp = central_product(factors, c, phis);
      for (size_t i = 0; i < k; ++i) {
        FactorEmbeddingCheck chk = verify_factor_embedding(cp, i);
        require(chk.ok && chk.certificate.domain_hirsch == 3,
                "mu_" + std::to_string(i + 1) + " injective by Hirsch certificate");
      }
      require(central_product_intersections_are_c(cp), "pairwise image intersection = C");
      require(central_product_class(cp) == 2, "class 2");
      // the central witness over the amalgam of the same shape re-verifies
      Double d = make_multi_double(h, PcSubgroup::generated(h, {h->parse("c")}), k);
      SolvabilityWitness w = central_witness(d.amalgam);
      require(w.reverify(), "central witness chain re-verifies");
      require(w.conclusion.find("free-by-nilpotent") != std::string::npos,
              "conclusion: free-by-nilpotent");
    }
  });

  criterion(7, "cyclic amalgamated subgroup in {H * H; a = a'}", 0, [] {
    auto h = heisenberg();
    auto h2 = h->renamed_copy("_2");
    AmalgamPtr g = Amalgam::identify(h, {h->parse("a")}, h2, {h2->parse("a_2")}, {"A", "B"});
    SolvabilityWitness w = cyclic_witness(g, g->embedding(0).apply(g->c_group()->gen(0)),
                                          g->embedding(1).apply(g->c_group()->gen(0)));
    require(w.reverify(), "witness re-verifies");
    require(w.kernel_facts.at(0).kind == "kernel-misses-amalgam", "K cap C = 1 certified");
    for (const auto& cert : w.kernel_facts.at(0).certificates)
      require(cert.preserved(), "C keeps full Hirsch length in D");
    const ExtendedHom& hom = *w.stages.at(0).to_pc;
    PcElement img = hom.apply(g->parse("a"));
    for (int k = 1; k <= 10; ++k)
      require(!img.pow(k).is_identity(), "image of a has no k-th power collapse, k <= 10");
    require(hom.codomain()->order(static_cast<size_t>(img.leader())) == 0,
            "the leading layer of the image is torsion-free");
    require(element_order(img) == 0, "the image of a has infinite order in D");
  });

  criterion(8, "double retraction on the Heisenberg double over its center", 0, [] {
    auto h = heisenberg();
    Double d = make_double(h, PcSubgroup::generated(h, {h->parse("c")}));
    std::mt19937_64 rng(10008);
    std::uniform_int_distribution<long> pe(-5, 5);
    for (int t = 0; t < 200; ++t) {
      PcElement x = h->element({Int(pe(rng)), Int(pe(rng)), Int(pe(rng))});
      require(d.retraction.apply(d.amalgam->from_factor(0, x)) == x,
              "psi is a retraction on the base factor");
      AmalgamElement w = d.amalgam->mul(d.amalgam->from_factor(0, x),
                                        d.amalgam->from_factor(1, d.iso.apply(x).inv()));
      require(d.retraction.apply(w).is_identity(), "psi(a (a phi)^-1) = 1");
    }
    require(kernel_misses_factors(d.retraction).holds, "kernel misses both factors");
  });

  criterion(9, "finite-index completion on the index-2 amalgam {H * H; gp(a^2, b, c)}", 0, [] {
    auto h = heisenberg();
    auto h2 = h->renamed_copy("_2");
    AmalgamPtr g =
        Amalgam::identify(h, {h->parse("a^2"), h->parse("b"), h->parse("c")}, h2,
                          {h2->parse("a_2^2"), h2->parse("b_2"), h2->parse("c_2")}, {"A", "B"});
    SolvabilityWitness w = finite_index_witness(g);
    require(w.reverify(), "witness re-verifies");
    const RatExtendedHom& ext = *w.stages.at(0).to_completion;
    // the extension agrees with the original embedding on C's generators
    for (size_t k = 0; k < g->c_group()->ngens(); ++k) {
      RatElement via_a = ext.factor_homs()[0].apply(g->embedding(0).apply(g->c_group()->gen(k)));
      RatElement via_b = ext.factor_homs()[1].apply(g->embedding(1).apply(g->c_group()->gen(k)));
      require(via_a == via_b, "agreement on the induced generators of C");
    }
    for (const auto& cert : w.kernel_facts.at(0).rational_certificates)
      require(cert.preserved(), "kernel misses factor " + cert.label);
    Int index = g->image_subgroup(0).index_in_ambient();
    require(index == 2, "[A : C] = 2");
    for (const auto& fh : ext.factor_homs())
      require(index % max_denominator(fh) == 0, "all rational denominators divide the index");
  });

  criterion(10, "derived-series trap verified; separation stays unknown", 10.0, [] {
    Workspace ws = Workspace::builtin("nil-neg");
    const AmalgamTarget& at = *ws.find_amalgam("G");
    TrapCertificate t = trap_certificate(at.amalgam, "a", "x", "1", "y");
    require(t.verified && !t.degenerate, "a^x = [a, a^y] verified");
    require(t.orientation == "as-stated", "orientation recorded");
    SeparateOutcome out = separate(at, "a", 4);
    require(!out.separated(), "separate returns unknown at derived length 4");
    PolyRsReport rep = polyrs_compatibility(at.amalgam);
    require(!rep.compatible && rep.failing_layer == 1,
            "polyrs compatibility fails naming layer i = 1");
    require(!abelianize_amalgam(at.amalgam).group.trivial(),
            "the abelianization is nonetheless nontrivial");
  });

  criterion(11, "compatible filtrations and tower on the Heisenberg double", 0, [] {
    Workspace ws = Workspace::builtin("heis-double");
    const AmalgamTarget& at = *ws.find_amalgam("G");
    require(polyrs_compatibility(at.amalgam).compatible, "filtrations are compatible");
    SolvabilityWitness w = polyrs_tower(at.amalgam);
    require(w.reverify(), "every stage hom re-verifies");
    require(w.stages.size() >= 2, "the tower has a central-layer stage and a base stage");
  });

  criterion(12, "abelian-factor example: [A : A1] = 2 and a single consistent sign", 0, [] {
    Workspace ws = Workspace::builtin("example-8-1");
    const AmalgamTarget& at = *ws.find_amalgam("G");
    SolvabilityWitness w = abelian_factor_witness(at.amalgam);
    require(w.reverify(), "witness re-verifies");
    bool found_index = false;
    for (const auto& chk : w.stages.at(0).checks)
      found_index |= chk.find("[A : A1] = 2") != std::string::npos;
    require(found_index, "[A : A1] = 2 computed");
    SignCheck s = squared_conjugation_sign_check(at.amalgam, "a", "x", "b", 3);
    require(s.consistent, "(a^(x^i))^2 = a^2 b^(eps i) holds for i in [-3, 3]");
    require(s.epsilon == -1, "a single consistent sign (eps = -1 in this convention)");
  });

  std::printf("---------------------------------------------\n");
  if (failures == 0) {
    std::printf("all 12 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", failures);
  return 1;
}
