#pragma once

// Free-group words over named generators, free reduction, and the textual
// presentation grammar shared by the rest of the library.
//
// Grammar:   word  := factor (('*')? factor)*
//            factor := atom ('^' (int | atom))*        left-associative
//            atom  := ident | '(' word ')' | '[' word ',' word ']'
// Conventions fixed for the whole artifact:
//            [u,v] = u^-1 v^-1 u v        u^v = v^-1 u v

#include <optional>
#include <string>
#include <vector>

#include "rsolv/basics.hpp"

namespace rsolv {

struct Syllable {
  int gen = 0;  // index into the owning generator list
  Int exp = 0;  // never 0 in a reduced Word
  bool operator==(const Syllable&) const = default;
};

// A freely reduced word: no zero exponents, no two adjacent syllables on the
// same generator.
struct Word {
  std::vector<Syllable> syls;

  bool empty() const { return syls.empty(); }
  bool operator==(const Word&) const = default;
};

// Free reduction of an arbitrary syllable sequence. Idempotent.
Word free_reduce(const std::vector<Syllable>& raw);

Word word_mul(const Word& a, const Word& b);
Word word_inv(const Word& a);
Word word_pow(const Word& a, const Int& k);
// u^v = v^-1 u v
Word word_conj(const Word& u, const Word& v);
// [u,v] = u^-1 v^-1 u v
Word word_comm(const Word& u, const Word& v);

// Parses `text` against the declared generator names. Reports undeclared
// generators and malformed syntax with a character position.
Word parse_word(const std::string& text, const std::vector<std::string>& gens);

std::string serialize_word(const Word& w, const std::vector<std::string>& gens);

// One defining relation, `lhs = rhs`. Relators are stored with empty rhs.
struct Relation {
  Word lhs, rhs;
  // lhs * rhs^-1, the relator form of the relation
  Word relator() const { return word_mul(lhs, word_inv(rhs)); }
};

struct Presentation {
  std::string name;
  std::vector<std::string> gens;       // pairwise distinct
  std::vector<Relation> rels;          // mention only declared generators
  std::vector<Int> orders;             // per generator; 0 = infinite
  std::optional<int> declared_class;

  int gen_index(const std::string& s) const;  // -1 if absent
};

// Parses a text block of the form
//   group NAME { gens: a, b, c; rels: [b,a] = c, [c,a]; class: 2; orders: a=4 }
// `rels`, `class` and `orders` are optional.
Presentation parse_presentation_text(const std::string& text);

std::string serialize_presentation_text(const Presentation& p);

}  // namespace rsolv
