#include "rsolv/central_product.hpp"

namespace rsolv {

CentralProduct central_product(std::vector<PcGroupPtr> factors, PcGroupPtr c,
                               std::vector<PcHom> phis) {
  if (factors.empty()) throw PreconditionError("central product needs at least one factor");
  if (phis.size() != factors.size())
    throw PreconditionError("central product needs one embedding per factor");
  for (size_t i = 0; i < factors.size(); ++i) {
    const PcHom& phi = phis[i];
    if (phi.domain() != c || phi.codomain() != factors[i])
      throw PreconditionError("central map " + std::to_string(i) + " has the wrong signature");
    if (!phi.is_injective())
      throw PreconditionError("central map " + std::to_string(i) + " is not injective");
    for (size_t k = 0; k < c->ngens(); ++k) {
      PcElement img = phi.apply(c->gen(k));
      for (size_t m = 0; m < factors[i]->ngens(); ++m)
        if (!comm(img, factors[i]->gen(m)).is_identity())
          throw PreconditionError("image of '" + c->name(k) + "' is not central in factor " +
                                  std::to_string(i + 1) + ": [" + c->name(k) + ", " +
                                  factors[i]->name(m) + "] != 1");
    }
  }

  CentralProduct out;
  out.factors = factors;
  out.c = c;
  out.central_maps = phis;
  out.product = direct_product(factors);

  std::vector<PcHom> iota;
  for (size_t i = 0; i < factors.size(); ++i)
    iota.push_back(product_embedding(factors, out.product, i));

  // Identification relations for adjacent pairs; transitivity covers the rest.
  std::vector<PcElement> ngens;
  for (size_t i = 0; i + 1 < factors.size(); ++i)
    for (size_t k = 0; k < c->ngens(); ++k)
      ngens.push_back(iota[i].apply(phis[i].apply(c->gen(k)))
                          .mul(iota[i + 1].apply(phis[i + 1].apply(c->gen(k))).inv()));
  PcSubgroup n = PcSubgroup::generated(out.product, ngens);

  QuotientResult q = quotient(out.product, n);
  out.result = q.group;
  out.projection = q.projection;
  for (size_t i = 0; i < factors.size(); ++i) {
    PcHom mu = iota[i].compose(out.projection);
    if (!mu.is_injective())
      throw std::logic_error("canonical map of factor " + std::to_string(i + 1) +
                             " failed to embed");
    out.canonical_maps.push_back(std::move(mu));
  }
  return out;
}

FactorEmbeddingCheck verify_factor_embedding(const CentralProduct& cp, size_t i) {
  FactorEmbeddingCheck out;
  auto cert = cp.canonical_maps[i].hirsch_certificate();
  out.certificate = {"factor " + std::to_string(i + 1), cert.first, cert.second};
  out.ok = out.certificate.preserved();
  return out;
}

int central_product_class(const CentralProduct& cp) {
  int cls = nilpotency_class(cp.result);
  int bound = 0;
  for (const auto& f : cp.factors) bound = std::max(bound, nilpotency_class(f));
  if (cls > bound)
    throw std::logic_error("central product class exceeds the factor class bound");
  return cls;
}

bool central_product_identifications_hold(const CentralProduct& cp) {
  for (size_t k = 0; k < cp.c->ngens(); ++k) {
    PcElement first =
        cp.canonical_maps[0].apply(cp.central_maps[0].apply(cp.c->gen(k)));
    for (size_t i = 1; i < cp.factors.size(); ++i)
      if (!(cp.canonical_maps[i].apply(cp.central_maps[i].apply(cp.c->gen(k))) == first))
        return false;
  }
  return true;
}

bool central_product_intersections_are_c(const CentralProduct& cp) {
  // Images of the mu_i are normal in the result (cross commutators vanish and
  // the images generate), so the intersection can be computed through the
  // quotient by one of them.
  std::vector<PcSubgroup> images;
  for (const auto& mu : cp.canonical_maps) images.push_back(mu.image());
  std::vector<PcElement> c_image_gens;
  for (size_t k = 0; k < cp.c->ngens(); ++k)
    c_image_gens.push_back(cp.canonical_maps[0].apply(cp.central_maps[0].apply(cp.c->gen(k))));
  PcSubgroup c_image = PcSubgroup::generated(cp.result, c_image_gens);
  for (size_t i = 0; i < images.size(); ++i)
    for (size_t j = i + 1; j < images.size(); ++j) {
      if (!images[j].is_normal()) return false;
      PcSubgroup cap = intersect_with_normal(images[i], images[j]);
      if (!cap.same_subgroup(c_image)) return false;
    }
  return true;
}

bool central_product_generates(const CentralProduct& cp) {
  std::vector<PcElement> gens;
  for (size_t i = 0; i < cp.factors.size(); ++i)
    for (size_t m = 0; m < cp.factors[i]->ngens(); ++m)
      gens.push_back(cp.canonical_maps[i].apply(cp.factors[i]->gen(m)));
  PcSubgroup joined = PcSubgroup::generated(cp.result, gens);
  return joined.same_subgroup(whole_group(cp.result));
}

}  // namespace rsolv
