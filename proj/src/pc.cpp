#include "rsolv/pc.hpp"

#include <algorithm>
#include <list>
#include <sstream>

namespace rsolv {

namespace {
constexpr size_t kCollectCap = 5'000'000;
constexpr int kWeightCapDefault = 64;

std::vector<Syllable> vec_to_syls(const std::vector<Int>& v) {
  std::vector<Syllable> out;
  for (size_t k = 0; k < v.size(); ++k)
    if (v[k] != 0) out.push_back({static_cast<int>(k), v[k]});
  return out;
}
}  // namespace

// ---------------------------------------------------------------- PcElement

PcElement::PcElement(PcGroupPtr g, std::vector<Int> exps) : g_(std::move(g)), e_(std::move(exps)) {}

bool PcElement::is_identity() const {
  for (const auto& x : e_)
    if (x != 0) return false;
  return true;
}

int PcElement::leader() const {
  for (size_t i = 0; i < e_.size(); ++i)
    if (e_[i] != 0) return static_cast<int>(i);
  return -1;
}

const Int& PcElement::lead_exp() const {
  static const Int zero = 0;
  int l = leader();
  return l < 0 ? zero : e_[static_cast<size_t>(l)];
}

PcElement PcElement::mul(const PcElement& o) const {
  if (g_ != o.g_) throw PreconditionError("pc elements from different groups");
  return {g_, g_->mul_vec(e_, o.e_)};
}

PcElement PcElement::inv() const { return {g_, g_->inv_vec(e_)}; }

PcElement PcElement::pow(const Int& k) const { return {g_, g_->pow_vec(e_, k)}; }

PcElement PcElement::conj(const PcElement& o) const { return o.inv().mul(*this).mul(o); }

bool PcElement::operator==(const PcElement& o) const { return g_ == o.g_ && e_ == o.e_; }

std::string PcElement::str() const { return g_ ? g_->element_str(*this) : "1"; }

PcElement comm(const PcElement& x, const PcElement& y) {
  return x.inv().mul(y.inv()).mul(x).mul(y);
}

// ------------------------------------------------------------------ PcGroup

bool PcGroup::is_torsion_free() const {
  for (const auto& e : d_.orders)
    if (e != 0) return false;
  return true;
}

size_t PcGroup::hirsch_length() const {
  size_t h = 0;
  for (const auto& e : d_.orders) h += (e == 0);
  return h;
}

PcElement PcGroup::identity() const {
  return {shared_from_this(), std::vector<Int>(ngens(), Int(0))};
}

PcElement PcGroup::gen(size_t i) const {
  std::vector<Int> e(ngens(), Int(0));
  e[i] = 1;
  return element(std::move(e));
}

PcElement PcGroup::element(std::vector<Int> exps) const {
  if (exps.size() != ngens()) throw PreconditionError("exponent vector has wrong length");
  return {shared_from_this(), collect(vec_to_syls(exps))};
}

PcElement PcGroup::collect_word(const Word& w) const {
  for (const auto& s : w.syls)
    if (s.gen < 0 || static_cast<size_t>(s.gen) >= ngens())
      throw PreconditionError("word mentions a generator outside this group");
  return {shared_from_this(), collect(w.syls)};
}

PcElement PcGroup::parse(const std::string& text) const {
  return collect_word(parse_word(text, d_.names));
}

std::string PcGroup::element_str(const PcElement& x) const {
  Word w;
  for (size_t k = 0; k < ngens(); ++k)
    if (x.exps()[k] != 0) w.syls.push_back({static_cast<int>(k), x.exps()[k]});
  return serialize_word(w, d_.names);
}

// ---------------------------------------------------------------- collection

std::vector<Int> PcGroup::collect(const std::vector<Syllable>& raw) const {
  std::list<Syllable> w;
  for (const auto& s : raw) {
    if (s.exp == 0) continue;
    if (s.gen < 0 || static_cast<size_t>(s.gen) >= ngens())
      throw PreconditionError("syllable generator out of range");
    w.push_back(s);
  }

  auto conj_trivial = [&](size_t j, size_t i) {
    for (const auto& x : d_.conj_tail[j][i])
      if (x != 0) return false;
    return true;
  };

  auto it = w.begin();
  size_t steps = 0;
  auto backstep = [&](std::list<Syllable>::iterator pos) {
    return pos == w.begin() ? pos : std::prev(pos);
  };

  while (it != w.end()) {
    if (++steps > kCollectCap)
      throw ConsistencyError("collection exceeded the step cap (non-terminating presentation?)");
    size_t gi = static_cast<size_t>(it->gen);

    if (it->exp == 0) {
      it = backstep(w.erase(it));
      continue;
    }

    const Int& e = d_.orders[gi];
    if (e != 0 && (it->exp < 0 || it->exp >= e)) {
      Int r = fmod(it->exp, e);
      Int q = (it->exp - r) / e;
      std::vector<Int> spill = pow_vec(d_.power_tail[gi], q);
      it->exp = r;
      auto ins = std::next(it);
      for (const auto& s : vec_to_syls(spill)) w.insert(ins, s);
      if (it->exp == 0) it = w.erase(it);
      it = backstep(it);
      continue;
    }

    auto nx = std::next(it);
    if (nx == w.end()) {
      ++it;
      continue;
    }
    if (nx->gen == it->gen) {
      it->exp += nx->exp;
      w.erase(nx);
      it = backstep(it);
      continue;
    }
    if (nx->gen > it->gen) {
      ++it;
      continue;
    }

    // Out-of-order pair g_j^b g_i^a with j > i.
    size_t j = gi, i = static_cast<size_t>(nx->gen);
    Int b = it->exp, a = nx->exp;
    if (conj_trivial(j, i)) {
      std::iter_swap(it, nx);
      it = backstep(it);
      continue;
    }
    if (class_ <= 4) {
      // whole-power move: g_j^b g_i^a = g_i^a (g_j^{g_i^a})^b
      std::vector<Int> x = pow_vec(conj_pow_gen(j, i, a), b);
      it = w.erase(it);
      it = w.erase(it);
      auto first_ins = w.insert(it, {static_cast<int>(i), a});
      for (const auto& s : vec_to_syls(x)) w.insert(it, s);
      it = backstep(first_ins);
      continue;
    }
    // general fallback: g_j^b g_i^a = g_i^s (g_j^{g_i^s})^b g_i^{a-s}, s = sign(a)
    int sgn = a > 0 ? 1 : -1;
    const std::vector<Int>& cv = sgn > 0 ? cpos_[j][i] : cneg_[j][i];
    std::vector<Int> x = pow_vec(cv, b);
    Int rest = a - sgn;
    it = w.erase(it);
    it = w.erase(it);
    auto first_ins = w.insert(it, {static_cast<int>(i), Int(sgn)});
    for (const auto& s : vec_to_syls(x)) w.insert(it, s);
    if (rest != 0) w.insert(it, {static_cast<int>(i), rest});
    it = backstep(first_ins);
  }

  std::vector<Int> out(ngens(), Int(0));
  int last = -1;
  for (const auto& s : w) {
    if (s.gen <= last) throw std::logic_error("collection produced an unsorted word");
    last = s.gen;
    out[static_cast<size_t>(s.gen)] = s.exp;
  }
  return out;
}

std::vector<Int> PcGroup::mul_vec(const std::vector<Int>& a, const std::vector<Int>& b) const {
  std::vector<Syllable> raw = vec_to_syls(a);
  for (const auto& s : vec_to_syls(b)) raw.push_back(s);
  return collect(raw);
}

std::vector<Int> PcGroup::inv_vec(const std::vector<Int>& a) const {
  std::vector<Syllable> syls = vec_to_syls(a);
  std::vector<Syllable> raw;
  for (auto rit = syls.rbegin(); rit != syls.rend(); ++rit) raw.push_back({rit->gen, -rit->exp});
  return collect(raw);
}

std::vector<Int> PcGroup::pow_vec(const std::vector<Int>& a, Int k) const {
  std::vector<Int> acc(ngens(), Int(0));
  if (k == 0) return acc;
  std::vector<Int> base = k < 0 ? inv_vec(a) : a;
  Int n = iabs(k);
  for (;;) {
    if (n % 2 == 1) acc = mul_vec(acc, base);
    n /= 2;
    if (n == 0) break;
    base = mul_vec(base, base);
  }
  return acc;
}

std::vector<Int> PcGroup::conj_pow_gen(size_t j, size_t i, const Int& a) const {
  // g_j^{g_i^a} = g_j * K_1^{C(a,1)} * K_2^{C(a,2)} * ... with K_1 = [g_j, g_i],
  // K_{m+1} = [K_m, g_i]. Exact for class <= 4: the cross commutators of the
  // K_m that the expansion would need all have weight above the class.
  std::vector<Int> result = collect({{static_cast<int>(j), Int(1)}});
  if (a == 0) return result;
  std::vector<Int> k = d_.conj_tail[j][i];
  Int binom = 1;  // C(a, 0)
  for (int m = 1; m <= class_ + 1; ++m) {
    bool zero = true;
    for (const auto& x : k) zero &= (x == 0);
    if (zero) break;
    if (m > class_)
      throw ConsistencyError("iterated commutators with " + d_.names[i] +
                             " do not vanish within the declared class");
    binom = binom * (a - (m - 1)) / m;  // C(a, m); the division is exact
    if (binom != 0) result = mul_vec(result, pow_vec(k, binom));
    k = mul_vec(inv_vec(k), conj_by_gen(k, i, +1));  // K_{m+1}
  }
  return result;
}

std::vector<Int> PcGroup::conj_by_gen(const std::vector<Int>& a, size_t i, int sign) const {
  // a must be supported on generators of index > i; maps through g_k -> g_k^{g_i^sign}.
  std::vector<Int> acc(ngens(), Int(0));
  for (size_t k = 0; k < ngens(); ++k) {
    if (a[k] == 0) continue;
    if (k <= i) throw std::logic_error("conj_by_gen: support not above the conjugating index");
    const std::vector<Int>& cv = sign > 0 ? cpos_[k][i] : cneg_[k][i];
    acc = mul_vec(acc, pow_vec(cv, a[k]));
  }
  return acc;
}

// ------------------------------------------------------------------- builder

void PcGroup::validate_structure() const {
  const size_t n = ngens();
  if (d_.orders.size() != n || d_.conj_tail.size() != n || d_.power_tail.size() != n)
    throw InputError("pc data arrays have inconsistent sizes");
  for (size_t i = 0; i < n; ++i) {
    if (d_.names[i].empty()) throw InputError("empty generator name");
    for (size_t j = i + 1; j < n; ++j)
      if (d_.names[i] == d_.names[j]) throw InputError("duplicate generator '" + d_.names[i] + "'");
    if (d_.orders[i] < 0) throw InputError("negative relative order");
  }
  auto check_vec = [&](const std::vector<Int>& v, size_t above, const std::string& what) {
    if (v.size() != n) throw InputError(what + ": tail vector has wrong length");
    for (size_t k = 0; k < n; ++k) {
      if (v[k] == 0) continue;
      if (k <= above)
        throw ConsistencyError(what + ": tail references generator '" + d_.names[k] +
                               "' of index not above " + d_.names[above]);
      if (d_.orders[k] != 0 && (v[k] < 0 || v[k] >= d_.orders[k]))
        throw InputError(what + ": tail exponent out of range at '" + d_.names[k] + "'");
    }
  };
  for (size_t j = 0; j < n; ++j) {
    if (d_.conj_tail[j].size() != j)
      throw InputError("conj tail triangle has wrong shape");
    for (size_t i = 0; i < j; ++i)
      check_vec(d_.conj_tail[j][i], i, "[" + d_.names[j] + "," + d_.names[i] + "]");
    if (d_.orders[j] != 0)
      check_vec(d_.power_tail[j], j, d_.names[j] + "^" + d_.orders[j].str());
    else {
      for (const auto& x : d_.power_tail[j])
        if (x != 0) throw InputError("power tail on infinite-order generator " + d_.names[j]);
    }
  }
}

void PcGroup::assign_weights() {
  const size_t n = ngens();
  const int cap = d_.declared_class.value_or(kWeightCapDefault);
  weights_.assign(n, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t j = 0; j < n; ++j)
      for (size_t i = 0; i < j; ++i) {
        int need = weights_[i] + weights_[j];
        for (size_t k = 0; k < n; ++k) {
          if (d_.conj_tail[j][i][k] == 0) continue;
          if (weights_[k] < need) {
            weights_[k] = need;
            if (need > cap)
              throw ConsistencyError(
                  "no nilpotent weight assignment within class " + std::to_string(cap) +
                  ": tail of [" + d_.names[j] + "," + d_.names[i] + "] forces weight " +
                  std::to_string(need) + " on " + d_.names[k]);
            changed = true;
          }
        }
      }
  }
  class_ = 1;
  for (int wgt : weights_) class_ = std::max(class_, wgt);
  if (d_.declared_class && *d_.declared_class < class_)
    throw ConsistencyError("declared class " + std::to_string(*d_.declared_class) +
                           " below the weight requirement " + std::to_string(class_));
  if (d_.declared_class) class_ = *d_.declared_class;
}

void PcGroup::compute_inverse_conj() {
  const size_t n = ngens();
  cpos_.assign(n, std::vector<std::vector<Int>>(n));
  cneg_.assign(n, std::vector<std::vector<Int>>(n));

  for (size_t ii = n; ii-- > 0;) {
    size_t i = ii;
    for (size_t j = i + 1; j < n; ++j) {
      std::vector<Syllable> word{{static_cast<int>(j), Int(1)}};
      for (const auto& s : vec_to_syls(d_.conj_tail[j][i])) word.push_back(s);
      cpos_[j][i] = collect(word);
    }
    for (size_t j = i + 1; j < n; ++j) {
      // Normal form of g_j itself (order-1 generators collapse to their tail).
      std::vector<Int> target = collect({{static_cast<int>(j), Int(1)}});
      if (cpos_[j][i] == target) {  // conjugation fixes g_j
        cneg_[j][i] = target;
        continue;
      }
      // Solve y^{g_i} = g_j by the unipotent fixed point y <- g_j (y^{g_i})^-1 y.
      std::vector<Int> y = target;
      bool done = false;
      for (int iter = 0; iter <= class_ + 2; ++iter) {
        std::vector<Int> z = conj_by_gen(y, i, +1);
        if (z == target) { done = true; break; }
        y = mul_vec(mul_vec(target, inv_vec(z)), y);
      }
      if (!done)
        throw ConsistencyError("conjugation by " + d_.names[i] +
                               "^-1 has no normal form on " + d_.names[j] +
                               " (presentation rejected)");
      cneg_[j][i] = y;
    }
  }
}

void PcGroup::check_overlaps() const {
  const size_t n = ngens();
  auto nf = [&](std::vector<Syllable> word) { return collect(word); };
  auto syl = [](size_t g, Int e) { return Syllable{static_cast<int>(g), std::move(e)}; };

  // Associativity overlaps g_k (g_j g_i) = (g_k g_j) g_i for i < j < k.
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        std::vector<Syllable> lhs{syl(k, 1), syl(i, 1), syl(j, 1)};
        for (const auto& s : vec_to_syls(d_.conj_tail[j][i])) lhs.push_back(s);
        std::vector<Syllable> rhs{syl(j, 1), syl(k, 1)};
        for (const auto& s : vec_to_syls(d_.conj_tail[k][j])) rhs.push_back(s);
        rhs.push_back(syl(i, 1));
        if (nf(lhs) != nf(rhs))
          throw ConsistencyError("associativity overlap fails at triple (" + d_.names[i] + ", " +
                                 d_.names[j] + ", " + d_.names[k] + ")");
      }

  for (size_t i = 0; i < n; ++i) {
    if (d_.orders[i] == 0) continue;
    // g_i^{e_i} g_i = g_i g_i^{e_i}
    std::vector<Syllable> lhs = vec_to_syls(d_.power_tail[i]);
    lhs.push_back(syl(i, 1));
    std::vector<Syllable> rhs{syl(i, 1)};
    for (const auto& s : vec_to_syls(d_.power_tail[i])) rhs.push_back(s);
    if (nf(lhs) != nf(rhs))
      throw ConsistencyError("power overlap fails at (" + d_.names[i] + ", " + d_.names[i] + ")");
  }

  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      if (d_.orders[j] != 0) {
        // g_j^{e_j} g_i = g_j^{e_j - 1} (g_j g_i)
        std::vector<Syllable> lhs = vec_to_syls(d_.power_tail[j]);
        lhs.push_back(syl(i, 1));
        std::vector<Syllable> rhs;
        if (d_.orders[j] > 1) rhs.push_back(syl(j, d_.orders[j] - 1));
        rhs.push_back(syl(i, 1));
        rhs.push_back(syl(j, 1));
        for (const auto& s : vec_to_syls(d_.conj_tail[j][i])) rhs.push_back(s);
        if (nf(lhs) != nf(rhs))
          throw ConsistencyError("power overlap fails at pair (" + d_.names[i] + ", " +
                                 d_.names[j] + "): " + d_.names[j] + " has finite order");
      }
      if (d_.orders[i] != 0) {
        // g_j g_i^{e_i} = (g_j g_i) g_i^{e_i - 1}
        std::vector<Syllable> lhs{syl(j, 1)};
        for (const auto& s : vec_to_syls(d_.power_tail[i])) lhs.push_back(s);
        std::vector<Syllable> rhs{syl(i, 1), syl(j, 1)};
        for (const auto& s : vec_to_syls(d_.conj_tail[j][i])) rhs.push_back(s);
        if (d_.orders[i] > 1) rhs.push_back(syl(i, d_.orders[i] - 1));
        if (nf(lhs) != nf(rhs))
          throw ConsistencyError("power overlap fails at pair (" + d_.names[i] + ", " +
                                 d_.names[j] + "): " + d_.names[i] + " has finite order");
      }
    }
}

PcGroupPtr PcGroup::build(PcData data) {
  auto g = std::shared_ptr<PcGroup>(new PcGroup());
  const size_t n = data.names.size();
  if (data.conj_tail.empty()) data.conj_tail.assign(n, {});
  for (size_t j = 0; j < n; ++j)
    if (data.conj_tail[j].size() != j) data.conj_tail[j].resize(j, std::vector<Int>(n, Int(0)));
  for (auto& row : data.conj_tail)
    for (auto& t : row)
      if (t.empty()) t.assign(n, Int(0));
  if (data.power_tail.empty()) data.power_tail.assign(n, std::vector<Int>(n, Int(0)));
  for (auto& t : data.power_tail)
    if (t.empty()) t.assign(n, Int(0));
  g->d_ = std::move(data);
  g->validate_structure();
  g->assign_weights();
  g->compute_inverse_conj();
  g->check_overlaps();
  return g;
}

namespace {

// Accepts a word already in pc normal form (strictly ascending generators)
// and returns the exponent vector; nullopt otherwise.
std::optional<std::vector<Int>> normal_form_vector(const Word& w, size_t n) {
  std::vector<Int> v(n, Int(0));
  int last = -1;
  for (const auto& s : w.syls) {
    if (s.gen <= last) return std::nullopt;
    last = s.gen;
    v[static_cast<size_t>(s.gen)] = s.exp;
  }
  return v;
}

}  // namespace

PcGroupPtr PcGroup::build(const Presentation& p) {
  const size_t n = p.gens.size();
  PcData d;
  d.names = p.gens;
  d.orders = p.orders.empty() ? std::vector<Int>(n, Int(0)) : p.orders;
  d.declared_class = p.declared_class;
  d.conj_tail.assign(n, {});
  for (size_t j = 0; j < n; ++j) d.conj_tail[j].assign(j, std::vector<Int>(n, Int(0)));
  d.power_tail.assign(n, std::vector<Int>(n, Int(0)));
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));

  for (const auto& rel : p.rels) {
    const Word& lhs = rel.lhs;
    // commutator pattern u^-1 v^-1 u v
    if (lhs.syls.size() == 4 && lhs.syls[0].exp == -1 && lhs.syls[1].exp == -1 &&
        lhs.syls[2].exp == 1 && lhs.syls[3].exp == 1 && lhs.syls[0].gen == lhs.syls[2].gen &&
        lhs.syls[1].gen == lhs.syls[3].gen && lhs.syls[0].gen != lhs.syls[1].gen) {
      size_t u = static_cast<size_t>(lhs.syls[0].gen);
      size_t v = static_cast<size_t>(lhs.syls[1].gen);
      size_t j = std::max(u, v), i = std::min(u, v);
      Word tail = u > v ? rel.rhs : word_inv(rel.rhs);
      auto vec = normal_form_vector(tail, n);
      if (!vec)
        throw InputError("tail of [" + p.gens[u] + "," + p.gens[v] +
                         "] is not in pc normal form (write the higher generator first)");
      if (seen[j][i])
        throw InputError("duplicate commutator relation for (" + p.gens[i] + "," + p.gens[j] + ")");
      seen[j][i] = true;
      d.conj_tail[j][i] = std::move(*vec);
      continue;
    }
    // power pattern g^e = tail (e = 1 declares a redundant generator)
    if (lhs.syls.size() == 1 && lhs.syls[0].exp >= 1) {
      size_t gi = static_cast<size_t>(lhs.syls[0].gen);
      auto vec = normal_form_vector(rel.rhs, n);
      if (!vec) throw InputError("power tail of " + p.gens[gi] + " is not in pc normal form");
      if (d.orders[gi] != 0 && d.orders[gi] != lhs.syls[0].exp)
        throw InputError("conflicting orders for " + p.gens[gi]);
      d.orders[gi] = lhs.syls[0].exp;
      d.power_tail[gi] = std::move(*vec);
      continue;
    }
    throw InputError("relation not in pc shape (expected [u,v] = tail or g^e = tail): " +
                     serialize_word(lhs, p.gens));
  }
  return build(std::move(d));
}

Presentation PcGroup::presentation() const {
  Presentation p;
  p.name = "G";
  p.gens = d_.names;
  p.orders = d_.orders;
  p.declared_class = class_;
  const size_t n = ngens();
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < j; ++i) {
      bool trivial = true;
      for (const auto& x : d_.conj_tail[j][i]) trivial &= (x == 0);
      if (trivial) continue;
      Word lhs = word_comm(Word{{{static_cast<int>(j), 1}}}, Word{{{static_cast<int>(i), 1}}});
      Word rhs;
      for (const auto& s : vec_to_syls(d_.conj_tail[j][i])) rhs.syls.push_back(s);
      p.rels.push_back({lhs, rhs});
    }
  for (size_t i = 0; i < n; ++i) {
    if (d_.orders[i] == 0) continue;
    bool trivial = true;
    for (const auto& x : d_.power_tail[i]) trivial &= (x == 0);
    if (trivial) continue;
    Word lhs{{{static_cast<int>(i), d_.orders[i]}}};
    Word rhs;
    for (const auto& s : vec_to_syls(d_.power_tail[i])) rhs.syls.push_back(s);
    p.rels.push_back({lhs, rhs});
  }
  return p;
}

PcGroupPtr PcGroup::renamed_copy(const std::string& suffix) const {
  PcData d = d_;
  for (auto& name : d.names) name += suffix;
  return build(std::move(d));
}

}  // namespace rsolv
