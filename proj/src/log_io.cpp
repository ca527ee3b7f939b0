#include "latsim/log_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace latsim {

std::string csv_header() {
  return "t,y_dot,psi,psi_dot,x,y,"
         "x_des,y_des,psi_des,psi_dot_des,psi_ddot_des,kappa,ay_des,phi,"
         "z1,z2,z3,z4,d_lat,d_yaw,"
         "z1_meas,z3_meas,"
         "z1_hat,z2_hat,d_lat_hat,z3_hat,z4_hat,d_yaw_hat,e_h1,e_h3,"
         "nu_h,z3_des_cmd,u_d,u,delta_raw,delta,saturated";
}

std::string row_to_csv(const LogRow& r) {
  // %.17g round-trips doubles exactly; 37 columns, saturated last as 0/1.
  char buf[1400];
  const int n = std::snprintf(
      buf, sizeof buf,
      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
      "%.17g,%.17g,"
      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d",
      r.t, r.y_dot, r.psi, r.psi_dot, r.x, r.y, r.x_des, r.y_des, r.psi_des, r.psi_dot_des,
      r.psi_ddot_des, r.kappa, r.ay_des, r.phi, r.z1, r.z2, r.z3, r.z4, r.d_lat, r.d_yaw,
      r.z1_meas, r.z3_meas, r.z1_hat, r.z2_hat, r.d_lat_hat, r.z3_hat, r.z4_hat, r.d_yaw_hat,
      r.e_h1, r.e_h3, r.nu_h, r.z3_des_cmd, r.u_d, r.u, r.delta_raw, r.delta,
      r.saturated ? 1 : 0);
  if (n < 0 || n >= static_cast<int>(sizeof buf))
    throw std::runtime_error("log row formatting overflow");
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_csv(const SimLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << csv_header() << '\n';
  for (const auto& r : log.rows) out << row_to_csv(r) << '\n';
  out.flush();
  if (!out.good()) throw std::runtime_error(path + ": write failed");
}

}  // namespace latsim
