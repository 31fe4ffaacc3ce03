#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rsolv/workspace.hpp"

using namespace rsolv;

static Json a2b3_workspace_json() {
  return Json::parse(R"({
    "format_version": 1,
    "groups": {
      "ZA": {"gens": ["a"], "class": 1},
      "ZB": {"gens": ["b"], "class": 1}
    },
    "amalgams": {
      "G": {"factors": ["ZA", "ZB"], "identify": {"gens": ["a^2"], "images": ["b^3"]}}
    },
    "elements": { "w": {"in": "G", "word": "a*b"} }
  })");
}

TEST_CASE("workspace JSON loads groups, amalgams and elements") {
  Workspace ws = Workspace::from_json(a2b3_workspace_json());
  CHECK(ws.find_group("ZA"));
  CHECK(ws.find_group("ZB"));
  REQUIRE(ws.find_amalgam("G"));
  const AmalgamTarget& at = *ws.find_amalgam("G");
  CHECK(at.amalgam->is_trivial(at.amalgam->parse("a^2*b^-3")));
  CHECK(ws.elements.size() == 1);
}

TEST_CASE("presentation text form and structured form both load") {
  Json j = Json::parse(R"({
    "format_version": 1,
    "groups": {
      "H": "group H { gens: a, b, c; rels: [b,a] = c; class: 2 }",
      "Q": {"gens": ["p"], "orders": {"p": 4}, "class": 1}
    }
  })");
  Workspace ws = Workspace::from_json(j);
  CHECK(ws.find_group("H")->parse("b*a").str() == "a^1*b^1*c^1");
  CHECK(ws.find_group("Q")->order(0) == 4);
}

TEST_CASE("bad references are input errors") {
  Json j = a2b3_workspace_json();
  j["amalgams"]["BAD"] = Json::parse(R"({"factors": ["ZA", "NOPE"],
                                         "identify": {"gens": ["a"], "images": ["a"]}})");
  CHECK_THROWS_AS(Workspace::from_json(j), InputError);
  CHECK_THROWS_AS(Workspace::from_json(Json::parse(R"({"format_version": 7})")), InputError);
}

TEST_CASE("builtins load and expose the shipped instances") {
  for (const auto& name : Workspace::builtin_names()) {
    Workspace ws = Workspace::builtin(name);
    CHECK((ws.groups.size() + ws.amalgams.size()) > 0);
  }
  Workspace nn = Workspace::builtin("nil-neg");
  REQUIRE(nn.find_amalgam("G"));
  CHECK(nn.find_amalgam("G")->amalgam->equal(nn.find_amalgam("G")->amalgam->parse("a"),
                                             nn.find_amalgam("G")->amalgam->parse("b")));
  Workspace hd = Workspace::builtin("heis-double");
  CHECK(hd.find_amalgam("G")->double_info.has_value());
  CHECK_THROWS_AS(Workspace::builtin("no-such"), InputError);
}

TEST_CASE("amalgam JSON round trip preserves the word problem") {
  Workspace ws = Workspace::from_json(a2b3_workspace_json());
  const AmalgamTarget& at = *ws.find_amalgam("G");
  Json j = amalgam_to_json(*at.amalgam);
  AmalgamPtr back = amalgam_from_json(j);
  CHECK(back->is_trivial(back->parse("a^2*b^-3")));
  CHECK_FALSE(back->equal(back->parse("a"), back->parse("b")));
  CHECK(back->parse("a*b*a").syllable_length() == 3);
}

TEST_CASE("witness certificates re-check against the workspace") {
  Workspace ws = Workspace::from_json(a2b3_workspace_json());
  const AmalgamTarget& at = *ws.find_amalgam("G");
  SolvabilityWitness w = central_witness(at.amalgam);
  Json cert = witness_to_json(w, "G");
  RecheckResult res = recheck_certificate(cert, ws);
  CHECK(res.ok);

  // a corrupted image word must fail the Von Dyck re-verification
  Json bad = cert;
  bad["chain"][0]["hom"]["factor_images"][0][0] = "z_1^2";
  RecheckResult res2 = recheck_certificate(bad, ws);
  CHECK_FALSE(res2.ok);
}

TEST_CASE("tower witness certificates re-check stage by stage") {
  Workspace ws = Workspace::builtin("heis-double");
  const AmalgamTarget& at = *ws.find_amalgam("G");
  SolvabilityWitness w = polyrs_tower(at.amalgam);
  Json cert = witness_to_json(w, "G");
  CHECK(cert["chain"].size() == 2);
  RecheckResult res = recheck_certificate(cert, ws);
  CHECK(res.ok);
}

TEST_CASE("completion witness certificates re-check") {
  Json j = Json::parse(R"({
    "format_version": 1,
    "groups": {
      "H": "group H { gens: a, b, c; rels: [b,a] = c; class: 2 }",
      "H2": "group H2 { gens: a2, b2, c2; rels: [b2,a2] = c2; class: 2 }"
    },
    "amalgams": {
      "G": {"factors": ["H", "H2"],
            "identify": {"gens": ["a^2", "b", "c"], "images": ["a2^2", "b2", "c2"]}}
    }
  })");
  Workspace ws = Workspace::from_json(j);
  SolvabilityWitness w = finite_index_witness(ws.find_amalgam("G")->amalgam);
  Json cert = witness_to_json(w, "G");
  RecheckResult res = recheck_certificate(cert, ws);
  CHECK(res.ok);
}

TEST_CASE("trap certificates re-check and detect tampering") {
  Workspace ws = Workspace::builtin("nil-neg");
  TrapCertificate t = trap_certificate(ws.find_amalgam("G")->amalgam, "a", "x", "1", "y");
  Json cert = trap_to_json(t, "G");
  CHECK(recheck_certificate(cert, ws).ok);
  Json bad = cert;
  bad["orientation"] = "inverted";
  CHECK_FALSE(recheck_certificate(bad, ws).ok);
}

TEST_CASE("witness JSON is byte-stable across rebuilds") {
  Workspace ws = Workspace::builtin("heis-double");
  const AmalgamTarget& at = *ws.find_amalgam("G");
  std::string once = witness_to_json(double_witness(*at.double_info), "G").dump(2);
  std::string twice = witness_to_json(double_witness(*at.double_info), "G").dump(2);
  CHECK(once == twice);
}

TEST_CASE("double declared in a workspace file") {
  Json j = Json::parse(R"({
    "format_version": 1,
    "groups": { "H": "group H { gens: a, b, c; rels: [b,a] = c; class: 2 }" },
    "amalgams": { "D": {"double": {"group": "H", "subgroup": ["c"], "copies": 2}} }
  })");
  Workspace ws = Workspace::from_json(j);
  REQUIRE(ws.find_amalgam("D"));
  CHECK(ws.find_amalgam("D")->double_info.has_value());
  SolvabilityWitness w = double_witness(*ws.find_amalgam("D")->double_info);
  CHECK(recheck_certificate(witness_to_json(w, "D"), ws).ok);
}
