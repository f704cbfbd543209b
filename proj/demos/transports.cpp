// Moves a random fiber vector between two points with each transport and
// prints the quantities each one preserves.

#include <cstdio>

#include "infogeo/infogeo.hpp"

int main() {
  using namespace infogeo;
  Rng rng(kDefaultSeed);
  const ProbabilityVector p = random_probability(rng, 4);
  const ProbabilityVector q = random_probability(rng, 4);
  const FiberVector u = random_fiber(rng, p);
  const FiberVector v = random_fiber(rng, p);

  std::printf("<u, v>_p                      %.15f\n", inner_product(u, v));
  std::printf("<e(u), m(v)>_q                %.15f\n",
              inner_product(e_transport(u, q), m_transport(v, q)));
  std::printf("<h(u), h(v)>_q                %.15f\n",
              inner_product(h_transport(u, q), h_transport(v, q)));
  std::printf("<e(u), e(v)>_q  (not kept)    %.15f\n",
              inner_product(e_transport(u, q), e_transport(v, q)));
}
