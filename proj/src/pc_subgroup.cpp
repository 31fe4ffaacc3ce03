#include <algorithm>

#include "rsolv/pc.hpp"

namespace rsolv {

namespace {
constexpr size_t kIgsCap = 1'000'000;
}

// Non-commutative echelonization: sift each element against the table,
// merging leading exponents by extended gcd; closure is maintained by
// pushing commutators of table entries (and conjugates by the ambient
// generators for normal closures), plus the power spill at finite layers.
PcSubgroup igs_build(PcGroupPtr g, std::vector<PcElement> gens, bool normal_closure) {
  const size_t n = g->ngens();
  std::vector<std::optional<PcElement>> slot(n);
  std::vector<PcElement> stack = std::move(gens);

  auto push = [&](const PcElement& x) {
    if (!x.is_identity()) stack.push_back(x);
  };
  auto closure_pushes = [&](const PcElement& x) {
    for (size_t m = 0; m < n; ++m)
      if (slot[m] && slot[m]->leader() != x.leader()) {
        push(comm(x, *slot[m]));
        push(comm(*slot[m], x));
      }
    if (normal_closure)
      for (size_t m = 0; m < n; ++m) {
        PcElement gm = g->gen(m);
        push(x.conj(gm));
        push(x.conj(gm.inv()));
      }
  };

  size_t ticks = 0;
  while (!stack.empty()) {
    PcElement x = stack.back();
    stack.pop_back();
    for (;;) {
      if (++ticks > kIgsCap) throw std::logic_error("induced-sequence completion did not settle");
      if (x.is_identity()) break;
      size_t l = static_cast<size_t>(x.leader());
      const Int& e = g->order(l);
      if (!slot[l]) {
        if (x.lead_exp() < 0) x = x.inv();
        if (e != 0) {
          Int d0 = x.lead_exp();
          Int gg = rsolv::gcd(d0, e);
          if (gg != d0) {
            Xgcd xg = xgcd(d0, e);
            PcElement xnew = x.pow(xg.s);
            push(x);
            x = xnew;
            if (x.lead_exp() != gg) throw std::logic_error("igs: gcd normalization failed");
          }
        }
        slot[l] = x;
        closure_pushes(x);
        if (e != 0) push(x.pow(e / x.lead_exp()));
        break;
      }
      PcElement h = *slot[l];
      Int d = h.lead_exp(), a = x.lead_exp();
      if (a % d == 0) {
        x = h.pow(-(a / d)).mul(x);
        continue;
      }
      Xgcd xg = xgcd(d, a);
      PcElement y = h.pow(xg.s).mul(x.pow(xg.t));
      if (y.leader() != static_cast<int>(l) || y.lead_exp() != xg.g)
        throw std::logic_error("igs: gcd merge failed");
      slot[l] = y;
      closure_pushes(y);
      if (e != 0) push(y.pow(e / xg.g));
      push(h);
      push(x);
      break;
    }
  }

  std::vector<PcElement> seq;
  for (size_t l = 0; l < n; ++l)
    if (slot[l]) seq.push_back(*slot[l]);

  // Reduce entries above each leader into [0, lead_exp).
  for (size_t s = 0; s < seq.size(); ++s)
    for (size_t t = s + 1; t < seq.size(); ++t) {
      size_t lt = static_cast<size_t>(seq[t].leader());
      Int q = fdiv(seq[s].exps()[lt], seq[t].lead_exp());
      if (q != 0) seq[s] = seq[s].mul(seq[t].pow(-q));
    }

  PcSubgroup out;
  out.g_ = std::move(g);
  out.seq_ = std::move(seq);
  return out;
}

PcSubgroup PcSubgroup::generated(PcGroupPtr g, const std::vector<PcElement>& gens,
                                 bool normal_closure) {
  for (const auto& x : gens)
    if (x.group() != g) throw PreconditionError("subgroup generator from a different group");
  return igs_build(std::move(g), gens, normal_closure);
}

size_t PcSubgroup::hirsch_length() const {
  size_t h = 0;
  for (const auto& x : seq_) h += (g_->order(static_cast<size_t>(x.leader())) == 0);
  return h;
}

std::optional<std::vector<Int>> PcSubgroup::membership(const PcElement& x) const {
  if (x.group() != g_) throw PreconditionError("membership: element from a different group");
  PcElement y = x;
  std::vector<Int> dec(seq_.size(), Int(0));
  for (size_t s = 0; s < seq_.size(); ++s) {
    if (y.is_identity()) break;
    int l = y.leader();
    int ls = seq_[s].leader();
    if (l < ls) return std::nullopt;
    if (l > ls) continue;
    const Int& d = seq_[s].lead_exp();
    const Int& a = y.lead_exp();
    if (a % d != 0) return std::nullopt;
    Int q = a / d;
    dec[s] = q;
    y = seq_[s].pow(-q).mul(y);
  }
  if (!y.is_identity()) return std::nullopt;
  return dec;
}

bool PcSubgroup::contains(const PcElement& x) const { return membership(x).has_value(); }

PcElement PcSubgroup::coset_rep(const PcElement& x) const {
  if (x.group() != g_) throw PreconditionError("coset_rep: element from a different group");
  PcElement y = x;
  for (size_t s = 0; s < seq_.size(); ++s) {
    if (y.is_identity()) break;
    int l = y.leader();
    int ls = seq_[s].leader();
    if (l > ls) continue;
    Int q = fdiv(y.exps()[static_cast<size_t>(ls)], seq_[s].lead_exp());
    if (q != 0) y = seq_[s].pow(-q).mul(y);
  }
  return y;
}

bool PcSubgroup::is_normal() const {
  for (size_t m = 0; m < g_->ngens(); ++m) {
    PcElement gm = g_->gen(m);
    for (const auto& h : seq_) {
      if (!contains(h.conj(gm))) return false;
      if (!contains(h.conj(gm.inv()))) return false;
    }
  }
  return true;
}

bool PcSubgroup::contains_subgroup(const PcSubgroup& o) const {
  for (const auto& h : o.seq_)
    if (!contains(h)) return false;
  return true;
}

bool PcSubgroup::same_subgroup(const PcSubgroup& o) const {
  return contains_subgroup(o) && o.contains_subgroup(*this);
}

PcSubgroup PcSubgroup::join(const PcSubgroup& o) const {
  if (g_ != o.g_) throw PreconditionError("join: different ambient groups");
  std::vector<PcElement> gens = seq_;
  gens.insert(gens.end(), o.seq_.begin(), o.seq_.end());
  return generated(g_, gens);
}

Int PcSubgroup::index_in_ambient() const {
  Int idx = 1;
  size_t s = 0;
  for (size_t m = 0; m < g_->ngens(); ++m) {
    if (s < seq_.size() && static_cast<size_t>(seq_[s].leader()) == m) {
      idx *= seq_[s].lead_exp();
      ++s;
    } else {
      if (g_->order(m) == 0) return 0;  // infinite index
      idx *= g_->order(m);
    }
  }
  return idx;
}

PcSubgroup::AsGroup PcSubgroup::as_group() const {
  const size_t r = seq_.size();
  PcData d;
  d.names.reserve(r);
  d.orders.assign(r, Int(0));
  d.conj_tail.assign(r, {});
  d.power_tail.assign(r, std::vector<Int>(r, Int(0)));
  d.declared_class = g_->nilpotency_class_bound();

  for (size_t s = 0; s < r; ++s) {
    size_t l = static_cast<size_t>(seq_[s].leader());
    d.names.push_back(g_->name(l));
    const Int& e = g_->order(l);
    if (e != 0) d.orders[s] = e / seq_[s].lead_exp();
  }
  auto decompose = [&](const PcElement& w, size_t above, const char* what) {
    auto dec = membership(w);
    if (!dec) throw std::logic_error(std::string("as_group: ") + what + " does not sift");
    for (size_t k = 0; k <= above && k < r; ++k)
      if ((*dec)[k] != 0)
        throw std::logic_error(std::string("as_group: ") + what + " not above its leader");
    return *dec;
  };
  for (size_t t = 0; t < r; ++t) {
    d.conj_tail[t].assign(t, std::vector<Int>(r, Int(0)));
    for (size_t s = 0; s < t; ++s)
      d.conj_tail[t][s] = decompose(comm(seq_[t], seq_[s]), s, "commutator tail");
  }
  for (size_t s = 0; s < r; ++s)
    if (d.orders[s] != 0) d.power_tail[s] = decompose(seq_[s].pow(d.orders[s]), s, "power tail");

  PcGroupPtr grp = PcGroup::build(std::move(d));
  std::vector<PcElement> images = seq_;
  PcHom incl(grp, g_, std::move(images));
  return {grp, std::move(incl)};
}

PcSubgroup whole_group(PcGroupPtr g) {
  std::vector<PcElement> gens;
  for (size_t i = 0; i < g->ngens(); ++i) gens.push_back(g->gen(i));
  return PcSubgroup::generated(std::move(g), gens);
}

PcSubgroup trivial_subgroup(PcGroupPtr g) { return PcSubgroup::generated(std::move(g), {}); }

Int element_order(const PcElement& x) {
  PcSubgroup cyc = PcSubgroup::generated(x.group(), {x});
  Int order = 1;
  for (const auto& h : cyc.igs()) {
    size_t l = static_cast<size_t>(h.leader());
    const Int& e = x.group()->order(l);
    if (e == 0) return 0;
    order *= e / h.lead_exp();
  }
  return order;
}

}  // namespace rsolv
