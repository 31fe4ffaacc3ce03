#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rsolv/word.hpp"

using namespace rsolv;

static const std::vector<std::string> gens{"a", "b", "c"};

TEST_CASE("free cancellation") {
  CHECK(parse_word("a*a^-1", gens).empty());
  CHECK(parse_word("", gens).empty());
  CHECK(parse_word("1", gens).empty());
}

TEST_CASE("commutator convention [u,v] = u^-1 v^-1 u v") {
  Word w = parse_word("[a,b]", gens);
  Word expect{{{0, -1}, {1, -1}, {0, 1}, {1, 1}}};
  CHECK(w == expect);
}

TEST_CASE("conjugation convention u^v = v^-1 u v") {
  Word w = parse_word("a^b", gens);
  Word expect{{{1, -1}, {0, 1}, {1, 1}}};
  CHECK(w == expect);
  // chains are left-associative: a^b^-1 = (a^b)^-1
  CHECK(parse_word("a^b^-1", gens) == word_inv(parse_word("a^b", gens)));
}

TEST_CASE("no reduction applies") {
  Word w = parse_word("a^2*b*a^-1", gens);
  Word expect{{{0, 2}, {1, 1}, {0, -1}}};
  CHECK(w == expect);
}

TEST_CASE("free_reduce merging and cascades") {
  CHECK(free_reduce({{0, 1}, {0, -1}}).empty());
  CHECK(free_reduce({{0, 2}, {0, 3}}) == Word{{{0, 5}}});
  CHECK(free_reduce({{0, 1}, {1, 1}, {1, -1}, {0, 1}}) == Word{{{0, 2}}});
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_word("a*q", gens), InputError);
  CHECK_THROWS_AS(parse_word("a*(b", gens), InputError);
  CHECK_THROWS_AS(parse_word("a^", gens), InputError);
  CHECK_THROWS_AS(parse_word("a)", gens), InputError);
}

static Word random_raw_word(std::mt19937_64& rng, int len) {
  std::uniform_int_distribution<int> pick_gen(0, 2), pick_exp(-4, 4);
  std::vector<Syllable> raw;
  for (int i = 0; i < len; ++i) raw.push_back({pick_gen(rng), Int(pick_exp(rng))});
  return free_reduce(raw);
}

TEST_CASE("free_reduce is idempotent and kills w * w^-1") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 300; ++trial) {
    Word w = random_raw_word(rng, 8);
    CHECK(free_reduce(w.syls) == w);
    CHECK(word_mul(w, word_inv(w)).empty());
  }
}

TEST_CASE("parse round-trips with the serializer") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 300; ++trial) {
    Word w = random_raw_word(rng, 6);
    CHECK(parse_word(serialize_word(w, gens), gens) == w);
  }
}

TEST_CASE("presentation text block") {
  Presentation p = parse_presentation_text(
      "group H { gens: a, b, c; rels: [b,a] = c, [c,a], [c,b]; class: 2 }");
  CHECK(p.name == "H");
  CHECK(p.gens == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(p.rels.size() == 3);
  CHECK(p.rels[0].lhs == parse_word("[b,a]", gens));
  CHECK(p.rels[0].rhs == parse_word("c", gens));
  CHECK(p.rels[1].rhs.empty());
  CHECK(p.declared_class == 2);
  // round trip
  Presentation q = parse_presentation_text(serialize_presentation_text(p));
  CHECK(q.gens == p.gens);
  CHECK(q.rels.size() == p.rels.size());
  CHECK(q.rels[0].relator() == p.rels[0].relator());

  CHECK_THROWS_AS(parse_presentation_text("group X { gens: a, a }"), InputError);
  CHECK_THROWS_AS(parse_presentation_text("group X { rels: [a,b] }"), InputError);
}
