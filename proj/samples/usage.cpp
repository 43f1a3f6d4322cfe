// Build a map by an earthquake, look at box masses along the ray, and
// estimate its quasisymmetric constant.

#include <cmath>
#include <cstdio>

#include "teich/teich.hpp"

using namespace teich;

int main() {
  MeasuredLamination lambda(AtomicCurrent({{Geodesic::from_angles(0.0, 3.0), 1.0},
                                           {Geodesic::from_angles(3.5, 5.5), 0.5}}));
  Box q = Box::from_angles(5.8, 0.4, 2.5, 3.2);
  std::printf("lambda(Q) = %g, L_id(Q) = %.6f\n", lambda.mass(q), liouville_mass(q));

  for (double t : {1.0, 10.0, 100.0, 1000.0}) {
    LiouvillePullback l(earthquake(PiecewiseMobiusHomeo(), lambda, t));
    std::printf("t = %6g  L(Q)/t = %.6f  ortho residual = %.2e\n", t, l.mass(q) / t,
                std::exp(-l.mass(q)) + std::exp(-l.mass(ortho(q))) - 1.0);
  }

  auto f = earthquake(PiecewiseMobiusHomeo(), lambda, 1.0);
  SamplerConfig sampler;
  sampler.rotations = 32;
  sampler.dilation_steps = 17;
  sampler.shear_steps = 17;
  auto est = qs_constant_search(f, sampler);
  std::printf("qs constant >= %.6f (%zu evaluations)\n", est.value, est.evaluations);
}
