#include "spinet/device.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace spinet {

namespace {

constexpr double high_doping = 1e23;
constexpr double low_doping = 4e20;
constexpr double preset_p = 0.66;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + value + "'");
  }
  if (trim(value.substr(used)).size() != 0)
    throw std::invalid_argument("config: trailing characters in value of '" + key + "'");
  return out;
}

Vec3 parse_vec3(const std::string& key, const std::string& value) {
  std::istringstream is(value);
  Vec3 v;
  if (!(is >> v[0] >> v[1] >> v[2])) throw std::invalid_argument("config: key '" + key + "' expects three numbers");
  std::string rest;
  if (is >> rest) throw std::invalid_argument("config: key '" + key + "' expects three numbers");
  return v;
}

}  // namespace

void DeviceProfile::validate() const {
  if (regions.empty()) throw std::invalid_argument("device: no regions");
  if (!(length_um > 0.0)) throw std::invalid_argument("device: length_um must be positive");
  if (!(debye_sq > 0.0)) throw std::invalid_argument("device: debye_sq must be positive");
  if (!(D0 > 0.0)) throw std::invalid_argument("device: D0 must be positive");
  if (!(tau_sf_scaled > 0.0)) throw std::invalid_argument("device: tau_sf_scaled must be positive");
  if (!(thermal_voltage_V > 0.0)) throw std::invalid_argument("device: thermal_voltage_V must be positive");
  constexpr double tol = 1e-12;
  if (std::abs(regions.front().begin) > tol || std::abs(regions.back().end - 1.0) > tol)
    throw std::invalid_argument("device: regions must cover [0,1]");
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const Region& r = regions[i];
    if (!(r.end > r.begin)) throw std::invalid_argument("device: region " + std::to_string(i) + " is empty");
    if (i > 0 && std::abs(regions[i - 1].end - r.begin) > tol)
      throw std::invalid_argument("device: regions " + std::to_string(i - 1) + " and " + std::to_string(i) + " are not contiguous");
    const double w = r.magnetization.norm();
    if (w != 0.0 && std::abs(w - 1.0) > 1e-12)
      throw std::invalid_argument("device: magnetization of region " + std::to_string(i) + " is neither zero nor unit");
    if (!(r.polarization >= 0.0 && r.polarization < 1.0))
      throw std::invalid_argument("device: polarization of region " + std::to_string(i) + " outside [0,1)");
    if (!(r.doping_m3 >= 0.0)) throw std::invalid_argument("device: negative doping in region " + std::to_string(i));
  }
}

DeviceProfile DeviceProfile::with_polarization(double pol) const {
  DeviceProfile out = *this;
  for (Region& r : out.regions)
    if (r.magnetization.norm() > 0.0) r.polarization = pol;
  return out;
}

DeviceProfile preset_three_layer() {
  DeviceProfile d;
  d.name = "three-layer";
  const Vec3 z = Vec3::UnitZ();
  d.regions = {
      {0.0, 1.0 / 6.0, high_doping, z, preset_p},
      {1.0 / 6.0, 5.0 / 6.0, low_doping, Vec3::Zero(), 0.0},
      {5.0 / 6.0, 1.0, high_doping, z, preset_p},
  };
  return d;
}

DeviceProfile preset_five_layer() {
  DeviceProfile d;
  d.name = "five-layer";
  d.regions = {
      {0.0, 1.0 / 6.0, high_doping, Vec3::Zero(), 0.0},
      {1.0 / 6.0, 10.0 / 21.0, low_doping, Vec3::UnitZ(), preset_p},
      {10.0 / 21.0, 11.0 / 21.0, low_doping, Vec3::Zero(), 0.0},
      {11.0 / 21.0, 5.0 / 6.0, low_doping, Vec3::UnitY(), preset_p},
      {5.0 / 6.0, 1.0, high_doping, Vec3::Zero(), 0.0},
  };
  return d;
}

std::vector<std::string> preset_names() { return {"three-layer", "five-layer"}; }

DeviceProfile preset_by_name(const std::string& name) {
  if (name == "three-layer") return preset_three_layer();
  if (name == "five-layer") return preset_five_layer();
  std::string list;
  for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown preset '" + name + "'; valid presets: " + list);
}

DeviceGrid sample_on_grid(const DeviceProfile& profile, int m) {
  if (m < 3) throw std::invalid_argument("sample_on_grid: m must be at least 3");
  profile.validate();
  double cmax = 0.0;
  for (const Region& r : profile.regions) cmax = std::max(cmax, r.doping_m3);
  if (!(cmax > 0.0)) throw std::invalid_argument("sample_on_grid: doping vanishes everywhere");

  DeviceGrid g;
  g.m = m;
  g.dx = 1.0 / m;
  g.C.assign(m, 0.0);
  g.omega.assign(m, Vec3::Zero());
  g.p.assign(m, 0.0);
  for (int k = 0; k < m; ++k) {
    const double a = static_cast<double>(k) / m;
    const double b = static_cast<double>(k + 1) / m;
    for (const Region& r : profile.regions) {
      const double overlap = std::min(b, r.end) - std::max(a, r.begin);
      if (overlap <= 0.0) continue;
      const double w = (a >= r.begin && b <= r.end) ? 1.0 : overlap * m;
      g.C[k] += w * r.doping_m3 / cmax;
      g.omega[k] += w * r.magnetization;
      g.p[k] += w * r.polarization;
    }
  }
  g.omega_face.resize(m + 1);
  g.p_face.resize(m + 1);
  g.eta_face.resize(m + 1);
  for (int i = 0; i <= m; ++i) {
    const int l = std::max(i - 1, 0), r = std::min(i, m - 1);
    g.omega_face[i] = 0.5 * (g.omega[l] + g.omega[r]);
    g.p_face[i] = 0.5 * (g.p[l] + g.p[r]);
    g.eta_face[i] = std::sqrt(1.0 - g.p_face[i] * g.p_face[i]);
  }
  return g;
}

int count_mixed_faces(const DeviceGrid& grid) {
  int count = 0;
  for (int i = 1; i < grid.m; ++i)
    if ((grid.omega[i - 1] - grid.omega[i]).norm() > 0.0) ++count;
  return count;
}

DeviceProfile read_profile(std::istream& in) {
  DeviceProfile d;
  d.regions.clear();
  enum class Section { none, device, region } section = Section::none;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[device]") {
        section = Section::device;
      } else if (line == "[region]") {
        section = Section::region;
        d.regions.emplace_back();
      } else {
        throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown section " + line);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section == Section::device) {
      if (key == "name") d.name = value;
      else if (key == "length_um") d.length_um = parse_double(key, value);
      else if (key == "debye_sq") d.debye_sq = parse_double(key, value);
      else if (key == "D0") d.D0 = parse_double(key, value);
      else if (key == "gamma") d.gamma = parse_double(key, value);
      else if (key == "tau_sf_scaled") d.tau_sf_scaled = parse_double(key, value);
      else if (key == "bias_V") d.bias_V = parse_double(key, value);
      else if (key == "thermal_voltage_V") d.thermal_voltage_V = parse_double(key, value);
      else throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown device key '" + key + "'");
    } else if (section == Section::region) {
      Region& r = d.regions.back();
      if (key == "begin") r.begin = parse_double(key, value);
      else if (key == "end") r.end = parse_double(key, value);
      else if (key == "doping_m3") r.doping_m3 = parse_double(key, value);
      else if (key == "magnetization") r.magnetization = parse_vec3(key, value);
      else if (key == "polarization") r.polarization = parse_double(key, value);
      else throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown region key '" + key + "'");
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": key outside a section");
    }
  }
  d.validate();
  return d;
}

DeviceProfile read_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  return read_profile(in);
}

void write_profile(std::ostream& out, const DeviceProfile& d) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(17);
  out << "[device]\n"
      << "name = " << d.name << "\n"
      << "length_um = " << d.length_um << "\n"
      << "debye_sq = " << d.debye_sq << "\n"
      << "D0 = " << d.D0 << "\n"
      << "gamma = " << d.gamma << "\n"
      << "tau_sf_scaled = " << d.tau_sf_scaled << "\n"
      << "bias_V = " << d.bias_V << "\n"
      << "thermal_voltage_V = " << d.thermal_voltage_V << "\n";
  for (const Region& r : d.regions) {
    out << "\n[region]\n"
        << "begin = " << r.begin << "\n"
        << "end = " << r.end << "\n"
        << "doping_m3 = " << r.doping_m3 << "\n"
        << "magnetization = " << r.magnetization[0] << " " << r.magnetization[1] << " " << r.magnetization[2] << "\n"
        << "polarization = " << r.polarization << "\n";
  }
  out.flags(flags);
  out.precision(prec);
}

}  // namespace spinet
