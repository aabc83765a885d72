#ifndef SPINET_DEVICE_HPP
#define SPINET_DEVICE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "spinet/pauli.hpp"

namespace spinet {

struct Region {
  double begin = 0.0;  ///< fraction of the device length
  double end = 1.0;
  double doping_m3 = 0.0;
  Vec3 magnetization = Vec3::Zero();
  double polarization = 0.0;
};

struct DeviceProfile {
  std::string name = "custom";
  double length_um = 1.2;
  std::vector<Region> regions;
  /// Coefficient of the scaled Poisson operator, -debye_sq * V'' = n0 - C.
  double debye_sq = 1.2e-4;
  double D0 = 6.9e-4;
  double gamma = 4.0;
  double tau_sf_scaled = 1.0;
  double bias_V = -1.0;
  double thermal_voltage_V = 0.026;

  /// Throws std::invalid_argument if the regions do not partition [0,1],
  /// a magnetization is neither zero nor unit, or a polarization is
  /// outside [0,1).
  void validate() const;
  double scaled_bias() const { return bias_V / thermal_voltage_V; }
  /// The profile with every region polarization replaced by p where the
  /// region is magnetic.
  DeviceProfile with_polarization(double p) const;
};

DeviceProfile preset_three_layer();
DeviceProfile preset_five_layer();
/// Names accepted by preset_by_name.
std::vector<std::string> preset_names();
/// Throws std::invalid_argument listing the valid names.
DeviceProfile preset_by_name(const std::string& name);

/// Profile sampled on m equal cells. Face arrays have m+1 entries; face i
/// sits between cells i-1 and i, and the two boundary faces copy the
/// adjacent cell.
struct DeviceGrid {
  int m = 0;
  double dx = 0.0;
  std::vector<double> C;
  std::vector<Vec3> omega;
  std::vector<double> p;
  std::vector<Vec3> omega_face;
  std::vector<double> p_face;
  std::vector<double> eta_face;

  double x_center(int k) const { return (k + 0.5) * dx; }
};

DeviceGrid sample_on_grid(const DeviceProfile& profile, int m);

/// Number of interior faces whose two adjacent cells carry different
/// magnetization vectors.
int count_mixed_faces(const DeviceGrid& grid);

/// Plain-text config: a [device] section of key = value lines followed by
/// one [region] section per region. '#' starts a comment.
DeviceProfile read_profile(std::istream& in);
DeviceProfile read_profile_file(const std::string& path);
void write_profile(std::ostream& out, const DeviceProfile& profile);

}  // namespace spinet

#endif
