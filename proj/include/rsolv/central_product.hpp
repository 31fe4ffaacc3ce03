#pragma once

// Generalized central products: the quotient of the direct product of the
// factors identifying the images of a common central subgroup, with verified
// injective canonical maps of the factors.

#include "rsolv/amalgam.hpp"
#include "rsolv/pc.hpp"

namespace rsolv {

struct CentralProduct {
  PcGroupPtr result;
  std::vector<PcGroupPtr> factors;
  PcGroupPtr c;
  std::vector<PcHom> central_maps;    // phi_i : C -> A_i, image central
  std::vector<PcHom> canonical_maps;  // mu_i : A_i -> result, injective
  PcGroupPtr product;                 // the direct product behind the quotient
  PcHom projection;                   // product -> result
};

// Builds result = (prod_i A_i) / gp(phi_i(c) phi_{i+1}(c)^-1). Each phi_i
// must be injective with central image; each mu_i is verified injective.
CentralProduct central_product(std::vector<PcGroupPtr> factors, PcGroupPtr c,
                               std::vector<PcHom> phis);

struct FactorEmbeddingCheck {
  bool ok = false;
  RankCertificate certificate;
};
// Hirsch certificate that mu_i embeds factor i.
FactorEmbeddingCheck verify_factor_embedding(const CentralProduct& cp, size_t i);

// Class of the result via its lower central series (at most the max factor class).
int central_product_class(const CentralProduct& cp);

// Exact identification check: mu_i(phi_i(c)) = mu_j(phi_j(c)) for all i, j
// and every generator c of C.
bool central_product_identifications_hold(const CentralProduct& cp);

// image(mu_i) cap image(mu_j) equals the common image of C, for all i != j.
bool central_product_intersections_are_c(const CentralProduct& cp);

// The images of all mu_i generate the result.
bool central_product_generates(const CentralProduct& cp);

}  // namespace rsolv
