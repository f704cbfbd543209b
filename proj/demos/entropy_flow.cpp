// Entropy ascent from (1/4, 3/4) compared with its closed form p0^{e^-t}.

#include <cstdio>

#include "infogeo/infogeo.hpp"

int main() {
  using namespace infogeo;
  const ProbabilityVector p0({0.25, 0.75});
  const Trajectory traj = integrate_flow(entropy_section(), p0, 5.0, 1e-3, Sign::plus);
  std::printf("%6s %12s %12s %10s\n", "t", "p_0", "closed", "|diff|");
  for (std::size_t k = 0; k < traj.size(); k += 500) {
    const double t = traj.time(k);
    const ProbabilityVector exact = entropy_flow_curve(p0, t);
    std::printf("%6.2f %12.9f %12.9f %10.2e\n", t, traj.point(k)[0], exact[0],
                distance(traj.point(k), exact));
  }
}
