#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "photonfluid/digest.hpp"
#include "photonfluid/error.hpp"

namespace photonfluid::cli {

namespace {

using V = ValueType;

std::string section_of(const std::string& key) { return key.substr(0, key.find('.')); }

double parse_number(const std::string& key, const std::string& raw) {
  const std::string s = boost::algorithm::trim_copy(raw);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size())
    throw InvalidArgument(fmt::format("{}: '{}' is not a number", key, raw));
  return v;
}

std::string canonical(const Parameter& p, const std::string& raw) {
  const std::string s = boost::algorithm::trim_copy(raw);
  switch (p.type) {
    case V::number:
      return fmt::format("{}", parse_number(p.key, s));
    case V::integer: {
      long v = 0;
      const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc() || end != s.data() + s.size())
        throw InvalidArgument(fmt::format("{}: '{}' is not an integer", p.key, raw));
      return fmt::format("{}", v);
    }
    case V::boolean: {
      const std::string l = boost::algorithm::to_lower_copy(s);
      if (l == "true" || l == "1" || l == "yes" || l == "on") return "true";
      if (l == "false" || l == "0" || l == "no" || l == "off") return "false";
      throw InvalidArgument(fmt::format("{}: '{}' is not a boolean", p.key, raw));
    }
    case V::text:
      return s;
    case V::number_list: {
      std::vector<std::string> parts;
      boost::algorithm::split(parts, s, boost::algorithm::is_any_of(","));
      std::string out;
      for (const auto& part : parts) {
        if (boost::algorithm::trim_copy(part).empty()) continue;
        if (!out.empty()) out += ",";
        out += fmt::format("{}", parse_number(p.key, part));
      }
      return out;
    }
  }
  return s;
}

}  // namespace

const std::vector<Parameter>& schema() {
  static const std::vector<Parameter> params{
      {"dispersion.betas", V::number_list, "1,2,3", "Mach numbers, one curve file each"},
      {"dispersion.q_min", V::number, "0", "lowest q xi"},
      {"dispersion.q_max", V::number, "4", "highest q xi"},
      {"dispersion.q_points", V::integer, "401", "samples per curve"},
      {"dispersion.alignment", V::number, "1", "cos of the angle between flow and q"},

      {"stability_map.beta_min", V::number, "0", "lowest Mach number"},
      {"stability_map.beta_max", V::number, "5", "highest Mach number"},
      {"stability_map.beta_points", V::integer, "201", "rows"},
      {"stability_map.q_min", V::number, "0", "lowest q xi"},
      {"stability_map.q_max", V::number, "5", "highest q xi"},
      {"stability_map.q_points", V::integer, "201", "columns"},

      {"grid.nx", V::integer, "128", "cells along the flow"},
      {"grid.ny", V::integer, "32", "cells across the flow"},
      {"grid.lx", V::number, "62.83185307179586", "domain length along x (20 pi)"},
      {"grid.ly", V::number, "15.707963267948966", "domain length along y (5 pi)"},
      {"grid.dz", V::number, "0", "step; 0 selects min(0.1 dx^2, 0.01 / (g rho_max))"},

      {"run.mode", V::text, "dual", "dual (two envelopes) or single (one coherent field)"},
      {"run.g", V::number, "0.5", "interaction constant"},
      {"run.rho0", V::number, "1", "background density per stream"},
      {"run.v0", V::number, "1", "relative stream velocity (must sit on the lattice)"},
      {"run.noise", V::number, "1e-6", "seed noise RMS relative to sqrt(rho0)"},
      {"run.seed", V::integer, "42", "noise seed"},
      {"run.z_end", V::number, "70", "propagation distance"},
      {"run.snapshot_every", V::integer, "100", "steps between snapshots"},
      {"run.dealias", V::boolean, "false", "2/3-rule truncation"},
      {"run.paraxial_limit", V::number, "0.3", "soft warning threshold on the flow angle sin(theta)"},
      {"run.flow_angle", V::number, "0", "physical sin(theta) of the tilt, checked against paraxial_limit"},

      {"analyze.q_values", V::number_list, "0.3,0.5,0.7,1.5", "q xi of the tracked modes, along x"},
      {"analyze.amp_lo", V::number, "1e-8", "lower relative amplitude of the fit window"},
      {"analyze.amp_hi", V::number, "3e-3", "upper relative amplitude of the fit window"},
      {"analyze.linear_cutoff", V::boolean, "true", "stop fits once any mode exceeds amp_hi"},
      {"analyze.channel", V::text, "total", "total or difference density"},
      {"analyze.vortex_floor", V::number, "0", "density floor for vortex detection; 0 = automatic"},
      {"analyze.far_field", V::boolean, "true", "write far-field rasters per snapshot"},

      {"atom.dipole_moment", V::number, "2.069e-29", "C m"},
      {"atom.linewidth_mhz", V::number, "6.06", "Gamma / 2 pi"},
      {"atom.wavelength_nm", V::number, "780.241", "transition wavelength"},
      {"atom.isat0_mw_cm2", V::number, "2.5", "resonant saturation intensity"},

      {"vapor.atomic_density_cm3", V::number, "1e12", "n_a"},
      {"vapor.detuning_mhz", V::number, "-120", "delta / 2 pi"},
      {"vapor.intensity_w_cm2", V::number, "0.4", "drive intensity"},
      {"vapor.wavelength_nm", V::number, "0", "probe wavelength; 0 uses the transition"},
      {"vapor.scan_detunings_gamma", V::number_list, "-100,-50,-20,-10,10,20,50,100", "delta / Gamma"},
      {"vapor.scan_densities_cm3", V::number_list, "1e11,1e12,1e13", "n_a values"},

      {"output.plots", V::boolean, "false", "write PPM images next to the CSVs"},
  };
  return params;
}

Config::Config() {
  for (const auto& p : schema()) values_[p.key] = canonical(p, p.fallback);
}

const Parameter& Config::lookup(const std::string& key) const {
  const auto& s = schema();
  const auto it = std::find_if(s.begin(), s.end(), [&](const Parameter& p) { return p.key == key; });
  if (it == s.end()) throw InvalidArgument(fmt::format("unknown configuration key '{}'", key));
  return *it;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = canonical(lookup(key), value); }

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw InvalidArgument(fmt::format("override '{}' is not of the form section.key=value", assignment));
  set(boost::algorithm::trim_copy(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void Config::merge_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError(fmt::format("configuration file {} not found", path.string()));
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidArgument(fmt::format("{}: {}", path.string(), e.message()));
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw InvalidArgument(fmt::format("{}: key '{}' outside a section", path.string(), section));
    for (const auto& [name, leaf] : body) set(section + "." + name, leaf.data());
  }
}

double Config::number(const std::string& key) const {
  lookup(key);
  return parse_number(key, values_.at(key));
}

long Config::integer(const std::string& key) const {
  lookup(key);
  return std::stol(values_.at(key));
}

bool Config::flag(const std::string& key) const {
  lookup(key);
  return values_.at(key) == "true";
}

const std::string& Config::text(const std::string& key) const {
  lookup(key);
  return values_.at(key);
}

std::vector<double> Config::numbers(const std::string& key) const {
  lookup(key);
  std::vector<double> out;
  std::vector<std::string> parts;
  const std::string& raw = values_.at(key);
  if (raw.empty()) return out;
  boost::algorithm::split(parts, raw, boost::algorithm::is_any_of(","));
  for (const auto& p : parts) out.push_back(parse_number(key, p));
  return out;
}

std::string Config::digest(const std::vector<std::string>& sections) const {
  Sha256 h;
  for (const auto& [key, value] : values_) {
    if (std::find(sections.begin(), sections.end(), section_of(key)) == sections.end()) continue;
    h.update(key).update("=").update(value).update("\n");
  }
  return h.hex();
}

nlohmann::json Config::to_json(const std::vector<std::string>& sections) const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : values_) {
    const std::string section = section_of(key);
    if (std::find(sections.begin(), sections.end(), section) == sections.end()) continue;
    j[section][key.substr(section.size() + 1)] = value;
  }
  return j;
}

std::string Config::to_ini(const std::vector<std::string>& sections) const {
  std::ostringstream out;
  std::string current;
  for (const auto& [key, value] : values_) {
    const std::string section = section_of(key);
    if (std::find(sections.begin(), sections.end(), section) == sections.end()) continue;
    if (section != current) {
      out << (current.empty() ? "" : "\n") << "[" << section << "]\n";
      current = section;
    }
    out << key.substr(section.size() + 1) << " = " << value << "\n";
  }
  return out.str();
}

}  // namespace photonfluid::cli
