#include "latsim/observer.hpp"

#include <stdexcept>

namespace latsim {

bool hurwitz_cubic(double c1, double c2, double c3) {
  return c1 > 0.0 && c2 > 0.0 && c3 > 0.0 && c1 * c2 > c3;
}

void ObserverGains::validate() const {
  if (!hurwitz_cubic(h1, h2, h3))
    throw std::invalid_argument("observer gains (h1,h2,h3) are not Hurwitz");
  if (!hurwitz_cubic(g1, g2, g3))
    throw std::invalid_argument("observer gains (g1,g2,g3) are not Hurwitz");
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw std::invalid_argument("observer epsilon must lie in (0, 1]");
}

ObserverState ehgo_derivative(const ObserverState& o, double z1_meas, double z3_meas,
                              double delta, const NominalCoefficients& nom,
                              const ObserverGains& k) {
  const double e1 = z1_meas - o.z1_hat;
  const double e3 = z3_meas - o.z3_hat;
  const double eps = k.epsilon;
  const double eps2 = eps * eps;
  const double eps3 = eps2 * eps;
  ObserverState d;
  d.z1_hat = o.z2_hat + k.h1 / eps * e1;
  d.z2_hat = nom.a22 * o.z2_hat + nom.a23 * o.z3_hat + nom.a24 * o.z4_hat + nom.b21 * delta +
             o.d_lat_hat + k.h2 / eps2 * e1;
  d.d_lat_hat = k.h3 / eps3 * e1;
  d.z3_hat = o.z4_hat + k.g1 / eps * e3;
  d.z4_hat = nom.a42 * o.z2_hat + nom.a43 * o.z3_hat + nom.a44 * o.z4_hat + nom.b41 * delta +
             o.d_yaw_hat + k.g2 / eps2 * e3;
  d.d_yaw_hat = k.g3 / eps3 * e3;
  return d;
}

}  // namespace latsim
