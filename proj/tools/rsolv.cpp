// rsolv: exact arithmetic in amalgams of finitely generated nilpotent groups
// with machine-checkable residual-solvability certificates.
//
// Exit codes: 0 verified/success, 1 property failed or unknown, 2 input error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "rsolv/workspace.hpp"

using namespace rsolv;

namespace {

struct OutputOpts {
  bool json = false;
  bool deterministic = false;
  std::string output_file;
};

void emit(const Json& j, const OutputOpts& opts) {
  std::string text = j.dump(2) + "\n";
  if (!opts.output_file.empty()) {
    std::ofstream out(opts.output_file);
    if (!out) throw InputError("cannot write to '" + opts.output_file + "'");
    out << text;
  }
  if (opts.json) std::cout << text;
}

const AmalgamTarget& need_amalgam(const Workspace& ws, const std::string& target) {
  const AmalgamTarget* at = ws.find_amalgam(target);
  if (!at) throw InputError("no amalgam named '" + target + "' in the workspace");
  return *at;
}

int cmd_nf(const std::string& file, const std::string& target, const std::string& word,
           const OutputOpts& opts) {
  Workspace ws = Workspace::load(file);
  if (PcGroupPtr g = ws.find_group(target)) {
    PcElement e = g->parse(word);
    std::cout << e.str() << "\n";
    if (opts.json || !opts.output_file.empty()) {
      Json j;
      j["target"] = target;
      j["word"] = word;
      j["normal_form"] = e.str();
      j["convention"] = convention_json();
      emit(j, opts);
    }
    return 0;
  }
  const AmalgamTarget& at = need_amalgam(ws, target);
  AmalgamElement e = at.amalgam->parse(word);
  std::cout << e.str() << "\n";
  if (opts.json || !opts.output_file.empty()) {
    Json j;
    j["target"] = target;
    j["word"] = word;
    j["normal_form"] = e.str();
    j["syllable_length"] = e.syllable_length();
    Json tail = Json::array();
    for (const auto& [f, r] : e.tail)
      tail.push_back(Json{{"factor", at.amalgam->factor_name(f)}, {"rep", r.str()}});
    j["head"] = e.head.str();
    j["tail"] = tail;
    j["convention"] = convention_json();
    emit(j, opts);
  }
  return 0;
}

int cmd_abelianize(const std::string& file, const std::string& target, const OutputOpts& opts) {
  Workspace ws = Workspace::load(file);
  AbelianizationResult ab;
  if (PcGroupPtr g = ws.find_group(target))
    ab = abelianize_pc(g);
  else
    ab = abelianize_amalgam(need_amalgam(ws, target).amalgam);
  std::cout << ab.group.str() << "\n";
  if (opts.json || !opts.output_file.empty()) {
    Json j;
    j["target"] = target;
    Json tor = Json::array();
    for (const auto& d : ab.group.torsion) tor.push_back(d.str());
    j["torsion_invariants"] = tor;
    j["free_rank"] = ab.group.free_rank;
    Json imgs = Json::object();
    for (size_t i = 0; i < ab.gen_names.size(); ++i) {
      Json coords = Json::array();
      for (const auto& c : ab.generator_images[i]) coords.push_back(c.str());
      imgs[ab.gen_names[i]] = coords;
    }
    j["generator_images"] = imgs;
    j["convention"] = convention_json();
    emit(j, opts);
  }
  return 0;
}

int cmd_verify(const std::string& theorem, const std::string& file, const std::string& target,
               const std::string& element, const std::string& cw, const std::string& cu,
               const std::string& cv, const std::string& sign_check, const OutputOpts& opts) {
  Workspace ws = Workspace::load(file);

  auto report_cert = [&](const std::string& thm, const Json& data) {
    Json j;
    j["kind"] = "report";
    j["theorem"] = thm;
    j["target"] = target;
    j["workspace"] = file;
    j["data"] = data;
    j["convention"] = convention_json();
    return j;
  };

  if (theorem == "not-perfect") {
    const AmalgamTarget& at = need_amalgam(ws, target);
    bool perfect = is_perfect(at.amalgam);
    Json frattini = Json::array();
    bool all_frattini = true;
    for (size_t f = 0; f < at.amalgam->nfactors(); ++f) {
      bool ok = frattini_consequence_check(at.amalgam->factor(f), at.amalgam->image_subgroup(f));
      frattini.push_back(ok);
      all_frattini &= ok;
    }
    Json data;
    data["is_perfect"] = perfect;
    data["frattini"] = frattini;
    data["abelianization"] = abelianize_amalgam(at.amalgam).group.str();
    emit(report_cert("not-perfect", data), opts);
    bool pass = !perfect && all_frattini;
    std::cout << (pass ? "verified: the amalgam is not perfect (abelianization "
                       : "FAILED: perfectness check (abelianization ")
              << abelianize_amalgam(at.amalgam).group.str() << ")\n";
    return pass ? 0 : 1;
  }

  if (theorem == "onto-abelianization") {
    const AmalgamTarget& at = need_amalgam(ws, target);
    QuotientD qd = quotient_D(at.amalgam);
    Json data;
    data["verified"] = qd.verified();
    data["d"] = qd.d.str();
    data["d_presentation_route"] = qd.d_presentation.str();
    data["routes_agree"] = qd.routes_agree;
    data["relations_die"] = qd.relations_die;
    data["images_generate"] = qd.images_generate;
    emit(report_cert("onto-abelianization", data), opts);
    std::cout << (qd.verified() ? "verified: G_ab maps onto D = " : "FAILED: D = ")
              << qd.d.str() << "\n";
    return qd.verified() ? 0 : 1;
  }

  if (theorem == "infinite-abelianization") {
    const AmalgamTarget& at = need_amalgam(ws, target);
    bool inf = abelianization_infinite(at.amalgam);
    Json data;
    data["infinite"] = inf;
    data["abelianization"] = abelianize_amalgam(at.amalgam).group.str();
    emit(report_cert("infinite-abelianization", data), opts);
    std::cout << (inf ? "verified: the abelianization is infinite\n"
                      : "property failed: the abelianization is finite\n");
    return inf ? 0 : 1;
  }

  if (theorem == "counterexample") {
    const AmalgamTarget& at = need_amalgam(ws, target);
    TrapCertificate t = trap_certificate(at.amalgam, element, cw, cu, cv);
    Json j = trap_to_json(t, target);
    j["workspace"] = file;
    emit(j, opts);
    if (t.verified) {
      auto conj_str = [&](const std::string& by) {
        return by == "1" ? element : element + "^" + by;
      };
      std::cout << "verified: " << conj_str(cw) << " = [" << conj_str(cu) << ", " << conj_str(cv)
                << "] (" << t.orientation
                << " orientation); the amalgam is not residually solvable and not "
                   "poly-residually solvable\n";
    }
    else
      std::cout << "property failed: the trap identity does not hold (lhs " << t.lhs_nf
                << ", rhs " << t.rhs_nf << ")\n";
    return t.verified ? 0 : 1;
  }

  if (theorem == "polyrs") {
    const AmalgamTarget& at = need_amalgam(ws, target);
    PolyRsReport rep = polyrs_compatibility(at.amalgam);
    if (!rep.compatible) {
      Json data;
      data["compatible"] = false;
      data["failing_layer"] = rep.failing_layer;
      Json layers = Json::array();
      for (const auto& l : rep.layers)
        layers.push_back(Json{{"layer", l.layer}, {"compatible", l.compatible},
                              {"detail", l.detail}});
      data["layers"] = layers;
      emit(report_cert("polyrs-compatibility", data), opts);
      std::cout << "property failed: incompatible filtrations at layer i = " << rep.failing_layer
                << "\n";
      return 1;
    }
    SolvabilityWitness w = polyrs_tower(at.amalgam);
    if (!w.reverify()) throw std::logic_error("emitted witness failed re-verification");
    Json j = witness_to_json(w, target);
    j["workspace"] = file;
    emit(j, opts);
    std::cout << "verified: " << w.conclusion << "\n";
    return 0;
  }

  auto witness_verify = [&](const std::function<SolvabilityWitness()>& build) {
    const AmalgamTarget& at = need_amalgam(ws, target);
    (void)at;
    SolvabilityWitness w = build();
    if (!w.reverify()) throw std::logic_error("emitted witness failed re-verification");
    Json j = witness_to_json(w, target);
    j["workspace"] = file;
    if (!sign_check.empty()) {
      // "a;x;b": verify (a^{x^i})^2 = a^2 b^{eps i} and record the sign
      auto p1 = sign_check.find(';');
      auto p2 = sign_check.rfind(';');
      if (p1 == std::string::npos || p2 == p1)
        throw InputError("--sign-check expects three words 'a;x;b'");
      SignCheck s = squared_conjugation_sign_check(
          need_amalgam(ws, target).amalgam, sign_check.substr(0, p1),
          sign_check.substr(p1 + 1, p2 - p1 - 1), sign_check.substr(p2 + 1), 3);
      Json sj;
      sj["consistent"] = s.consistent;
      sj["epsilon"] = s.epsilon;
      sj["details"] = s.details;
      j["convention"]["squared_conjugation_sign"] = sj;
      std::cout << (s.consistent ? "sign check: (a^(x^i))^2 = a^2 * b^(eps i) with eps = " +
                                       std::to_string(s.epsilon)
                                 : "sign check: no consistent sign")
                << "\n";
    }
    emit(j, opts);
    std::cout << "verified: " << w.conclusion << "\n";
    return 0;
  };

  if (theorem == "central")
    return witness_verify([&] { return central_witness(need_amalgam(ws, target).amalgam); });
  if (theorem == "cyclic")
    return witness_verify([&] {
      const AmalgamTarget& at = need_amalgam(ws, target);
      const PcGroupPtr& c = at.amalgam->c_group();
      if (c->ngens() != 1)
        throw PreconditionError("the amalgamated subgroup is not cyclic");
      return cyclic_witness(at.amalgam, at.amalgam->embedding(0).apply(c->gen(0)),
                            at.amalgam->embedding(1).apply(c->gen(0)));
    });
  if (theorem == "double")
    return witness_verify([&] {
      const AmalgamTarget& at = need_amalgam(ws, target);
      if (!at.double_info)
        throw PreconditionError("target was not built as a double (declare it with \"double\")");
      return double_witness(*at.double_info);
    });
  if (theorem == "abelian-factor")
    return witness_verify([&] { return abelian_factor_witness(need_amalgam(ws, target).amalgam); });
  if (theorem == "finite-index")
    return witness_verify([&] { return finite_index_witness(need_amalgam(ws, target).amalgam); });

  throw InputError(
      "unknown theorem tag '" + theorem +
      "' (available: not-perfect, onto-abelianization, infinite-abelianization, cyclic, "
      "central, double, abelian-factor, finite-index, polyrs, counterexample)");
}

int cmd_separate(const std::string& file, const std::string& target, const std::string& word,
                 int max_len, const OutputOpts& opts) {
  Workspace ws = Workspace::load(file);
  const AmalgamTarget& at = need_amalgam(ws, target);
  SeparateOutcome out = separate(at, word, max_len, opts.deterministic);
  if (out.separated()) {
    Json j = witness_to_json(*out.witness, target);
    j["workspace"] = file;
    WitnessImage img = out.witness->map(at.amalgam->parse(word));
    j["separated"] = Json{{"word", word}, {"image", img.description}, {"nonidentity", true}};
    j["notes"] = out.notes;
    emit(j, opts);
    std::cout << "separated via the " << strategy_name(out.witness->strategy)
              << " strategy; image " << img.description << "\n";
    return 0;
  }
  Json j;
  j["kind"] = "report";
  j["theorem"] = "separate";
  j["target"] = target;
  j["workspace"] = file;
  j["data"] = Json{{"word", word}, {"result", "unknown"},
                   {"max_derived_length", max_len}};
  j["notes"] = out.notes;
  j["convention"] = convention_json();
  emit(j, opts);
  std::cout << "unknown\n";
  for (const auto& n : out.notes) std::cout << "  " << n << "\n";
  return 1;
}

int cmd_recheck(const std::string& certfile, std::string workspace_file) {
  std::ifstream in(certfile);
  if (!in) throw InputError("cannot open certificate '" + certfile + "'");
  Json cert;
  try {
    in >> cert;
  } catch (const std::exception& e) {
    throw InputError("certificate JSON parse error: " + std::string(e.what()));
  }
  if (workspace_file.empty()) workspace_file = cert.value("workspace", "");
  if (workspace_file.empty())
    throw InputError("no workspace given and the certificate names none");
  Workspace ws = Workspace::load(workspace_file);
  RecheckResult res = recheck_certificate(cert, ws);
  for (const auto& n : res.notes) std::cout << n << "\n";
  std::cout << (res.ok ? "recheck passed\n" : "recheck FAILED\n");
  return res.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rsolv: exact arithmetic in generalized free products of finitely generated nilpotent "
      "groups, with residual-solvability witnesses and certificates"};
  app.require_subcommand(1);

  OutputOpts opts;
  std::string file, target = "G", word, theorem, certfile, wsfile;
  std::string element = "a", cw = "x", cu = "1", cv = "y", sign_check;
  int max_len = 4;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", opts.json, "print the certificate JSON to stdout");
    sub->add_flag("--deterministic", opts.deterministic,
                  "fixed strategy order and byte-stable output");
    sub->add_option("-o,--output", opts.output_file, "write the certificate JSON to a file");
  };

  CLI::App* nf = app.add_subcommand("nf", "normal form of a word in a group or amalgam");
  nf->add_option("file", file, "workspace file or builtin:<name>")->required();
  nf->add_option("target", target, "group or amalgam name")->required();
  nf->add_option("word", word, "word over the generators")->required();
  add_common(nf);

  CLI::App* ab = app.add_subcommand("abelianize", "invariant factors of the abelianization");
  ab->add_option("file", file)->required();
  ab->add_option("target", target)->required();
  add_common(ab);

  CLI::App* ver = app.add_subcommand("verify", "run a theorem verifier and emit a certificate");
  ver->add_option("theorem", theorem,
                  "not-perfect | onto-abelianization | infinite-abelianization | cyclic | "
                  "central | double | abelian-factor | finite-index | polyrs | counterexample")
      ->required();
  ver->add_option("file", file)->required();
  ver->add_option("target", target, "amalgam name (default G)");
  ver->add_option("--element", element, "trap element (counterexample)");
  ver->add_option("--conj-w", cw, "trap conjugator w");
  ver->add_option("--conj-u", cu, "trap conjugator u");
  ver->add_option("--conj-v", cv, "trap conjugator v");
  ver->add_option("--sign-check", sign_check,
                  "verify (a^(x^i))^2 = a^2 b^(eps i); three words 'a;x;b'");
  add_common(ver);

  CLI::App* sep = app.add_subcommand("separate", "separate an element in a solvable quotient");
  sep->add_option("file", file)->required();
  sep->add_option("target", target)->required();
  sep->add_option("word", word)->required();
  sep->add_option("--max-derived-length", max_len, "bound on the quotient derived length");
  add_common(sep);

  CLI::App* rc = app.add_subcommand("recheck", "re-run the checks recorded in a certificate");
  rc->add_option("certificate", certfile)->required();
  rc->add_option("workspace", wsfile, "workspace file (defaults to the one named inside)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // exit-code contract: input errors are 2
  }

  try {
    if (nf->parsed()) return cmd_nf(file, target, word, opts);
    if (ab->parsed()) return cmd_abelianize(file, target, opts);
    if (ver->parsed()) {
      if (file == "builtin:example-8-1" && theorem == "abelian-factor" && sign_check.empty())
        sign_check = "a;x;b";
      return cmd_verify(theorem, file, target, element, cw, cu, cv, sign_check, opts);
    }
    if (sep->parsed()) return cmd_separate(file, target, word, max_len, opts);
    if (rc->parsed()) return cmd_recheck(certfile, wsfile);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const ConsistencyError& e) {
    std::cerr << "inconsistent presentation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
