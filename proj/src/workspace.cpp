#include "rsolv/workspace.hpp"

#include <fstream>
#include <sstream>

namespace rsolv {

namespace {

std::string amalgam_word_string(const Amalgam& g, const AmalgamElement& e) {
  std::vector<std::string> parts;
  PcElement h0 = g.embedding(0).apply(e.head);
  if (!h0.is_identity()) parts.push_back(h0.str());
  for (const auto& [f, r] : e.tail) parts.push_back(r.str());
  if (parts.empty()) return "1";
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
  return out;
}

std::string rat_string(const Rat& r) { return r.str(); }

Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(Int(s));
  return Rat(Int(s.substr(0, slash))) / Rat(Int(s.substr(slash + 1)));
}

}  // namespace

// ------------------------------------------------------------ presentations

Json presentation_to_json(const Presentation& p) {
  Json j;
  j["gens"] = p.gens;
  Json rels = Json::array();
  for (const auto& r : p.rels) {
    std::string s = serialize_word(r.lhs, p.gens);
    if (!r.rhs.empty()) s += " = " + serialize_word(r.rhs, p.gens);
    rels.push_back(s);
  }
  j["relations"] = rels;
  Json orders = Json::object();
  for (size_t i = 0; i < p.gens.size(); ++i)
    if (!p.orders.empty() && p.orders[i] != 0) orders[p.gens[i]] = p.orders[i].str();
  if (!orders.empty()) j["orders"] = orders;
  if (p.declared_class) j["class"] = *p.declared_class;
  return j;
}

Presentation presentation_from_json(const Json& j, const std::string& name) {
  if (j.is_string()) {
    Presentation p = parse_presentation_text(j.get<std::string>());
    return p;
  }
  Presentation p;
  p.name = name;
  for (const auto& g : j.at("gens")) p.gens.push_back(g.get<std::string>());
  p.orders.assign(p.gens.size(), Int(0));
  if (j.contains("orders"))
    for (auto it = j.at("orders").begin(); it != j.at("orders").end(); ++it) {
      int gi = p.gen_index(it.key());
      if (gi < 0) throw InputError("order for undeclared generator '" + it.key() + "'");
      p.orders[static_cast<size_t>(gi)] =
          it.value().is_string() ? Int(it.value().get<std::string>())
                                 : Int(it.value().get<long long>());
    }
  if (j.contains("class")) p.declared_class = j.at("class").get<int>();
  if (j.contains("relations"))
    for (const auto& r : j.at("relations")) {
      std::string s = r.get<std::string>();
      size_t eq = s.find('=');
      if (eq == std::string::npos)
        p.rels.push_back({parse_word(s, p.gens), {}});
      else
        p.rels.push_back({parse_word(s.substr(0, eq), p.gens),
                          parse_word(s.substr(eq + 1), p.gens)});
    }
  return p;
}

Json amalgam_to_json(const Amalgam& a) {
  Json j;
  Json factors = Json::array();
  for (size_t f = 0; f < a.nfactors(); ++f) {
    Json fj = presentation_to_json(a.factor(f)->presentation());
    fj["name"] = a.factor_name(f);
    factors.push_back(fj);
  }
  j["factors"] = factors;
  j["c"] = presentation_to_json(a.c_group()->presentation());
  Json embs = Json::array();
  for (size_t f = 0; f < a.nfactors(); ++f) {
    Json words = Json::array();
    for (size_t k = 0; k < a.c_group()->ngens(); ++k)
      words.push_back(a.embedding(f).apply(a.c_group()->gen(k)).str());
    embs.push_back(words);
  }
  j["embeddings"] = embs;
  return j;
}

AmalgamPtr amalgam_from_json(const Json& j) {
  std::vector<PcGroupPtr> factors;
  std::vector<std::string> names;
  for (const auto& fj : j.at("factors")) {
    std::string name = fj.contains("name") ? fj.at("name").get<std::string>() : "";
    factors.push_back(PcGroup::build(presentation_from_json(fj, name.empty() ? "F" : name)));
    names.push_back(name.empty() ? ("F" + std::to_string(names.size() + 1)) : name);
  }
  PcGroupPtr c = PcGroup::build(presentation_from_json(j.at("c"), "C"));
  std::vector<PcHom> embeddings;
  const Json& embs = j.at("embeddings");
  for (size_t f = 0; f < factors.size(); ++f) {
    std::vector<PcElement> images;
    for (const auto& w : embs.at(f)) images.push_back(factors[f]->parse(w.get<std::string>()));
    embeddings.emplace_back(c, factors[f], std::move(images));
  }
  return Amalgam::build(std::move(factors), std::move(c), std::move(embeddings),
                        std::move(names));
}

// ---------------------------------------------------------------- workspace

PcGroupPtr Workspace::find_group(const std::string& name) const {
  for (const auto& [n, g] : groups)
    if (n == name) return g;
  return nullptr;
}

const AmalgamTarget* Workspace::find_amalgam(const std::string& name) const {
  for (const auto& [n, a] : amalgams)
    if (n == name) return &a;
  return nullptr;
}

Workspace Workspace::from_json(const Json& j) {
  Workspace ws;
  ws.format_version = j.value("format_version", 1);
  if (ws.format_version != 1)
    throw InputError("unsupported format_version " + std::to_string(ws.format_version));
  if (j.contains("groups"))
    for (auto it = j.at("groups").begin(); it != j.at("groups").end(); ++it)
      ws.groups.emplace_back(it.key(),
                             PcGroup::build(presentation_from_json(it.value(), it.key())));
  if (j.contains("subgroups"))
    for (auto it = j.at("subgroups").begin(); it != j.at("subgroups").end(); ++it) {
      const Json& sj = it.value();
      PcGroupPtr g = ws.find_group(sj.at("group").get<std::string>());
      if (!g) throw InputError("subgroup '" + it.key() + "' references an unknown group");
      std::vector<PcElement> gens;
      for (const auto& w : sj.at("gens")) gens.push_back(g->parse(w.get<std::string>()));
      ws.subgroups.emplace_back(it.key(), PcSubgroup::generated(g, gens));
    }
  if (j.contains("amalgams"))
    for (auto it = j.at("amalgams").begin(); it != j.at("amalgams").end(); ++it) {
      const Json& aj = it.value();
      if (aj.contains("double")) {
        const Json& dj = aj.at("double");
        PcGroupPtr g = ws.find_group(dj.at("group").get<std::string>());
        if (!g) throw InputError("double '" + it.key() + "' references an unknown group");
        std::vector<PcElement> gens;
        for (const auto& w : dj.at("subgroup")) gens.push_back(g->parse(w.get<std::string>()));
        PcSubgroup c = PcSubgroup::generated(g, gens);
        size_t copies = dj.value("copies", 2);
        Double d = copies == 2 ? make_double(g, c) : make_multi_double(g, c, copies);
        ws.amalgams.emplace_back(it.key(), AmalgamTarget{d.amalgam, d});
        continue;
      }
      std::vector<std::string> fnames;
      for (const auto& fn : aj.at("factors")) fnames.push_back(fn.get<std::string>());
      std::vector<PcGroupPtr> factors;
      for (const auto& fn : fnames) {
        PcGroupPtr g = ws.find_group(fn);
        if (!g) throw InputError("amalgam '" + it.key() + "' references unknown group '" + fn + "'");
        factors.push_back(g);
      }
      for (size_t p = 0; p < fnames.size(); ++p)
        for (size_t q = p + 1; q < fnames.size(); ++q)
          if (fnames[p] == fnames[q])
            throw InputError("amalgam '" + it.key() +
                             "' repeats a factor; declare a double instead");
      if (aj.contains("identify")) {
        if (factors.size() != 2)
          throw InputError("'identify' amalgams take exactly two factors");
        std::vector<PcElement> gens, images;
        for (const auto& w : aj.at("identify").at("gens"))
          gens.push_back(factors[0]->parse(w.get<std::string>()));
        for (const auto& w : aj.at("identify").at("images"))
          images.push_back(factors[1]->parse(w.get<std::string>()));
        ws.amalgams.emplace_back(
            it.key(),
            AmalgamTarget{Amalgam::identify(factors[0], gens, factors[1], images, fnames),
                          std::nullopt});
        continue;
      }
      PcGroupPtr c = ws.find_group(aj.at("c").get<std::string>());
      if (!c) throw InputError("amalgam '" + it.key() + "' references an unknown C group");
      std::vector<PcHom> embeddings;
      for (size_t f = 0; f < factors.size(); ++f) {
        std::vector<PcElement> images;
        for (const auto& w : aj.at("embeddings").at(f))
          images.push_back(factors[f]->parse(w.get<std::string>()));
        embeddings.emplace_back(c, factors[f], std::move(images));
      }
      ws.amalgams.emplace_back(
          it.key(), AmalgamTarget{Amalgam::build(factors, c, embeddings, fnames), std::nullopt});
    }
  if (j.contains("elements"))
    for (auto it = j.at("elements").begin(); it != j.at("elements").end(); ++it) {
      std::string target = it.value().at("in").get<std::string>();
      std::string word = it.value().at("word").get<std::string>();
      if (PcGroupPtr g = ws.find_group(target))
        g->parse(word);  // resolves and validates
      else if (const AmalgamTarget* at = ws.find_amalgam(target))
        at->amalgam->parse(word);
      else
        throw InputError("element '" + it.key() + "' references unknown target '" + target + "'");
      ws.elements.emplace_back(it.key(), std::move(target), std::move(word));
    }
  return ws;
}

Workspace Workspace::load(const std::string& file_or_builtin) {
  if (file_or_builtin.rfind("builtin:", 0) == 0) return builtin(file_or_builtin.substr(8));
  std::ifstream in(file_or_builtin);
  if (!in) throw InputError("cannot open workspace file '" + file_or_builtin + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError("workspace JSON parse error: " + std::string(e.what()));
  }
  return from_json(j);
}

std::vector<std::string> Workspace::builtin_names() {
  return {"heisenberg", "freenilp-3-2", "nil-neg", "example-8-1", "heis-double"};
}

Workspace Workspace::builtin(const std::string& name) {
  Workspace ws;
  auto heis = [] {
    return PcGroup::build(
        parse_presentation_text("group H { gens: a, b, c; rels: [b,a] = c; class: 2 }"));
  };
  if (name == "heisenberg") {
    ws.groups.emplace_back("H", heis());
    return ws;
  }
  if (name == "freenilp-3-2") {
    ws.groups.emplace_back("F", PcGroup::build(parse_presentation_text(
                                    "group F { gens: x, y, c, d, e; rels: [y,x] = c, [c,x] = d, "
                                    "[c,y] = e; class: 3 }")));
    return ws;
  }
  if (name == "nil-neg") {
    auto a = PcGroup::build(
        parse_presentation_text("group A { gens: a, x, t; rels: [x,a] = t; class: 2 }"));
    auto b = PcGroup::build(parse_presentation_text(
        "group B { gens: b, y, c, d, e; rels: [y,b] = c, [c,b] = d, [c,y] = e; class: 3 }"));
    ws.groups.emplace_back("A", a);
    ws.groups.emplace_back("B", b);
    ws.amalgams.emplace_back(
        "G", AmalgamTarget{Amalgam::identify(a, {a->parse("a"), a->parse("a^x")}, b,
                                             {b->parse("b"), b->parse("[b,b^y]")}, {"A", "B"}),
                           std::nullopt});
    ws.elements.emplace_back("a", "G", "a");
    return ws;
  }
  if (name == "example-8-1") {
    auto a = PcGroup::build(parse_presentation_text("group A { gens: a, b, c; class: 1 }"));
    auto b = PcGroup::build(
        parse_presentation_text("group B { gens: x, y, z; rels: [x,y] = z; class: 2 }"));
    ws.groups.emplace_back("A", a);
    ws.groups.emplace_back("B", b);
    ws.amalgams.emplace_back(
        "G", AmalgamTarget{Amalgam::identify(a, {a->parse("a^2"), a->parse("b")}, b,
                                             {b->parse("y"), b->parse("z")}, {"A", "B"}),
                           std::nullopt});
    return ws;
  }
  if (name == "heis-double") {
    auto h = heis();
    ws.groups.emplace_back("H", h);
    Double d = make_double(h, PcSubgroup::generated(h, {h->parse("c")}));
    ws.amalgams.emplace_back("G", AmalgamTarget{d.amalgam, d});
    return ws;
  }
  std::string all;
  for (const auto& n : builtin_names()) all += (all.empty() ? "" : ", ") + n;
  throw InputError("unknown builtin '" + name + "' (available: " + all + ")");
}

// -------------------------------------------------------------- certificates

Json convention_json() {
  Json j;
  j["commutator"] = kCommutatorConvention;
  j["conjugation"] = kConjugationConvention;
  return j;
}

namespace {

Json rank_cert_json(const RankCertificate& c) {
  Json j;
  j["label"] = c.label;
  j["domain_hirsch"] = c.domain_hirsch;
  j["image_hirsch"] = c.image_hirsch;
  return j;
}

Json rational_cert_json(const RationalRankCertificate& c) {
  Json j;
  j["label"] = c.label;
  j["ab_rank"] = {c.ab_rank_expected, c.ab_rank_actual};
  j["derived_rank"] = {c.derived_rank_expected, c.derived_rank_actual};
  return j;
}

Json stage_to_json(const ChainStage& st) {
  Json j;
  j["label"] = st.label;
  Json hom;
  if (st.to_pc) {
    hom["type"] = "extended";
    Json cod;
    cod["type"] = "pc";
    cod["presentation"] = presentation_to_json(st.to_pc->codomain()->presentation());
    j["codomain"] = cod;
    Json imgs = Json::array();
    for (const auto& fh : st.to_pc->factor_homs()) {
      Json words = Json::array();
      for (const auto& img : fh.images()) words.push_back(img.str());
      imgs.push_back(words);
    }
    hom["factor_images"] = imgs;
  } else if (st.to_amalgam) {
    hom["type"] = "amalgam";
    Json cod;
    cod["type"] = "amalgam";
    cod["amalgam"] = amalgam_to_json(*st.to_amalgam->codomain());
    j["codomain"] = cod;
    Json imgs = Json::array();
    for (const auto& fimgs : st.to_amalgam->images()) {
      Json words = Json::array();
      for (const auto& img : fimgs)
        words.push_back(amalgam_word_string(*st.to_amalgam->codomain(), img));
      imgs.push_back(words);
    }
    hom["factor_images"] = imgs;
  } else if (st.to_completion) {
    hom["type"] = "completion";
    Json cod;
    cod["type"] = "rational-class2";
    cod["base"] = presentation_to_json(st.to_completion->codomain()->base()->presentation());
    j["codomain"] = cod;
    Json imgs = Json::array();
    for (const auto& fh : st.to_completion->factor_homs()) {
      Json gens = Json::array();
      for (const auto& img : fh.images()) {
        Json coords = Json::array();
        for (const auto& c : img.coords) coords.push_back(rat_string(c));
        gens.push_back(coords);
      }
      imgs.push_back(gens);
    }
    hom["factor_images"] = imgs;
  }
  j["hom"] = hom;
  j["checks"] = st.checks;
  return j;
}

}  // namespace

Json witness_to_json(const SolvabilityWitness& w, const std::string& target) {
  Json j;
  j["kind"] = "witness";
  j["strategy"] = strategy_name(w.strategy);
  j["target"] = target;
  Json chain = Json::array();
  for (const auto& st : w.stages) chain.push_back(stage_to_json(st));
  j["chain"] = chain;
  Json facts = Json::array();
  for (const auto& f : w.kernel_facts) {
    Json fj;
    fj["stage"] = f.stage;
    fj["kind"] = f.kind;
    fj["licensed"] = f.licensed;
    Json certs = Json::array();
    for (const auto& c : f.certificates) certs.push_back(rank_cert_json(c));
    fj["certificates"] = certs;
    Json rcerts = Json::array();
    for (const auto& c : f.rational_certificates) rcerts.push_back(rational_cert_json(c));
    fj["rational_certificates"] = rcerts;
    facts.push_back(fj);
  }
  j["kernel_facts"] = facts;
  j["conclusion"] = w.conclusion;
  j["solvable_derived_length"] = w.solvable_derived_length;
  j["convention"] = convention_json();
  return j;
}

Json trap_to_json(const TrapCertificate& t, const std::string& target) {
  Json j;
  j["kind"] = "trap";
  j["target"] = target;
  j["element"] = t.element;
  j["commutator_identity"] = {{"w", t.w}, {"u", t.u}, {"v", t.v}};
  j["verified"] = t.verified;
  j["degenerate"] = t.degenerate;
  j["orientation"] = t.orientation;
  if (!t.verified) {
    j["lhs_normal_form"] = t.lhs_nf;
    j["rhs_normal_form"] = t.rhs_nf;
  }
  j["license"] = t.license;
  j["convention"] = convention_json();
  return j;
}

// ------------------------------------------------------------------ recheck

RecheckResult recheck_certificate(const Json& cert, const Workspace& ws) {
  RecheckResult out;
  auto check = [&](bool ok, const std::string& what) {
    out.notes.push_back(std::string(ok ? "ok: " : "FAILED: ") + what);
    out.ok &= ok;
  };
  std::string kind = cert.at("kind").get<std::string>();
  std::string target = cert.value("target", "");
  const AmalgamTarget* at = ws.find_amalgam(target);

  if (kind == "trap") {
    if (!at) throw InputError("recheck: amalgam '" + target + "' not in the workspace");
    const Json& ci = cert.at("commutator_identity");
    TrapCertificate t =
        trap_certificate(at->amalgam, cert.at("element").get<std::string>(),
                         ci.at("w").get<std::string>(), ci.at("u").get<std::string>(),
                         ci.at("v").get<std::string>());
    check(t.verified == cert.at("verified").get<bool>(), "trap identity verification matches");
    check(t.orientation == cert.at("orientation").get<std::string>(),
          "recorded orientation matches");
    return out;
  }

  if (kind == "witness") {
    if (!at) throw InputError("recheck: amalgam '" + target + "' not in the workspace");
    AmalgamPtr current = at->amalgam;
    std::vector<ChainStage> stages;
    for (const auto& stj : cert.at("chain")) {
      const Json& hom = stj.at("hom");
      std::string type = hom.at("type").get<std::string>();
      ChainStage st;
      st.label = stj.at("label").get<std::string>();
      try {
        if (type == "extended") {
          PcGroupPtr cod = PcGroup::build(
              presentation_from_json(stj.at("codomain").at("presentation"), "Q"));
          std::vector<PcHom> fhoms;
          for (size_t f = 0; f < current->nfactors(); ++f) {
            std::vector<PcElement> images;
            for (const auto& w : hom.at("factor_images").at(f))
              images.push_back(cod->parse(w.get<std::string>()));
            fhoms.emplace_back(current->factor(f), cod, std::move(images));
          }
          st.to_pc = ExtendedHom(current, cod, std::move(fhoms));
          check(true, "stage '" + st.label + "': extended hom re-verified");
        } else if (type == "amalgam") {
          AmalgamPtr cod = amalgam_from_json(stj.at("codomain").at("amalgam"));
          std::vector<std::vector<AmalgamElement>> images;
          for (size_t f = 0; f < current->nfactors(); ++f) {
            std::vector<AmalgamElement> fimgs;
            for (const auto& w : hom.at("factor_images").at(f))
              fimgs.push_back(cod->parse(w.get<std::string>()));
            images.push_back(std::move(fimgs));
          }
          st.to_amalgam = AmalgamHom(current, cod, std::move(images));
          current = cod;
          check(true, "stage '" + st.label + "': amalgam hom re-verified");
        } else if (type == "completion") {
          PcGroupPtr base =
              PcGroup::build(presentation_from_json(stj.at("codomain").at("base"), "B"));
          RatNilp2Ptr cod = RatNilp2::build(base);
          std::vector<RatHom> fhoms;
          for (size_t f = 0; f < current->nfactors(); ++f) {
            std::vector<RatElement> images;
            for (const auto& gj : hom.at("factor_images").at(f)) {
              std::vector<Rat> coords;
              for (const auto& c : gj) coords.push_back(rat_from_string(c.get<std::string>()));
              images.push_back(cod->element(std::move(coords)));
            }
            fhoms.emplace_back(current->factor(f), cod, std::move(images));
          }
          st.to_completion = RatExtendedHom(current, cod, std::move(fhoms));
          check(true, "stage '" + st.label + "': completion hom re-verified");
        } else {
          check(false, "unknown stage hom type '" + type + "'");
        }
      } catch (const std::exception& e) {
        check(false, "stage '" + st.label + "': " + e.what());
        return out;
      }
      stages.push_back(std::move(st));
    }
    for (const auto& fj : cert.at("kernel_facts")) {
      size_t idx = fj.at("stage").get<size_t>();
      std::string fkind = fj.at("kind").get<std::string>();
      if (idx >= stages.size()) {
        check(false, "kernel fact references a missing stage");
        continue;
      }
      const ChainStage& st = stages[idx];
      if (fkind == "kernel-misses-factors")
        check(st.to_pc && kernel_misses_factors(*st.to_pc).holds, "kernel misses the factors");
      else if (fkind == "kernel-misses-amalgam")
        check(st.to_pc && kernel_misses_amalgam(*st.to_pc).holds,
              "kernel misses the amalgamated subgroup");
      else if (fkind == "kernel-misses-factors-rational") {
        bool ok = st.to_completion.has_value();
        if (ok)
          for (size_t f = 0; f < st.to_completion->factor_homs().size(); ++f)
            ok &= rational_injectivity_certificate(st.to_completion->factor_homs()[f],
                                                   "factor " + std::to_string(f + 1))
                      .preserved();
        check(ok, "rational rank certificates hold on both factors");
      } else if (fkind == "kernel-structure")
        check(true, "recorded kernel structure (textual license)");
      else
        check(false, "unknown kernel fact kind '" + fkind + "'");
    }
    if (cert.contains("separated")) {
      const Json& sj = cert.at("separated");
      AmalgamElement e = at->amalgam->parse(sj.at("word").get<std::string>());
      SolvabilityWitness tmp;
      tmp.stages = stages;
      WitnessImage img = tmp.map(e);
      check(img.nonidentity == sj.at("nonidentity").get<bool>(),
            "separation image of '" + sj.at("word").get<std::string>() + "' reproduced");
    }
    return out;
  }

  if (kind == "report") {
    std::string theorem = cert.at("theorem").get<std::string>();
    const Json& data = cert.at("data");
    if (theorem == "not-perfect") {
      if (!at) throw InputError("recheck: amalgam '" + target + "' not in the workspace");
      check(is_perfect(at->amalgam) == data.at("is_perfect").get<bool>(),
            "perfectness recomputed");
      for (size_t f = 0; f < at->amalgam->nfactors(); ++f)
        check(frattini_consequence_check(at->amalgam->factor(f),
                                         at->amalgam->image_subgroup(f)) ==
                  data.at("frattini").at(f).get<bool>(),
              "frattini consequence on factor " + std::to_string(f + 1));
    } else if (theorem == "onto-abelianization") {
      if (!at) throw InputError("recheck: amalgam '" + target + "' not in the workspace");
      QuotientD qd = quotient_D(at->amalgam);
      check(qd.verified() == data.at("verified").get<bool>(), "theta verification recomputed");
      check(qd.d.str() == data.at("d").get<std::string>(), "invariants of D recomputed");
    } else if (theorem == "polyrs-compatibility") {
      if (!at) throw InputError("recheck: amalgam '" + target + "' not in the workspace");
      PolyRsReport rep = polyrs_compatibility(at->amalgam);
      check(rep.compatible == data.at("compatible").get<bool>(), "compatibility recomputed");
      if (!rep.compatible)
        check(rep.failing_layer == data.at("failing_layer").get<int>(),
              "failing layer recomputed");
    } else if (theorem == "infinite-abelianization") {
      if (!at) throw InputError("recheck: amalgam '" + target + "' not in the workspace");
      check(abelianization_infinite(at->amalgam) == data.at("infinite").get<bool>(),
            "infiniteness recomputed");
    } else {
      check(false, "unknown report theorem '" + theorem + "'");
    }
    return out;
  }

  check(false, "unknown certificate kind '" + kind + "'");
  return out;
}

}  // namespace rsolv
