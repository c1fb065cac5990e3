#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "regge/model.hpp"
#include "regge/poles.hpp"

namespace regge::io {

using json = nlohmann::json;

// Run configuration: JSON document plus dotted-path accessors with defaults.
// Flag overrides beat config values, which beat defaults.
struct RunConfig {
  json doc = json::object();

  bool has(const std::string& dotted) const;
  double number(const std::string& dotted, double fallback) const;
  double required_number(const std::string& dotted) const;
  int integer(const std::string& dotted, int fallback) const;
  int required_integer(const std::string& dotted) const;
  bool boolean(const std::string& dotted, bool fallback) const;
  std::string text(const std::string& dotted, const std::string& fallback) const;

  void apply_override(const std::string& dotted, const std::string& value);
};

RunConfig load_config(const std::string& path);
model::WarpSpec warp_from_config(const RunConfig& cfg);

// FNV-1a 64 of the canonical (sorted-key) dump.
std::string config_hash(const RunConfig& cfg);

// CSV writing: numbers at 17 significant digits; rows are validated finite
// before anything is written.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_json(const std::string& path, const json& doc);

std::string format_g17(double v);

// Pole table serializers (CSV schema: re,im,multiplicity,family,res_re,res_im,winding).
void write_pole_csv(const std::string& path, const std::vector<poles::ReggePole>& ps);
json pole_json(const std::vector<poles::ReggePole>& ps, const json& meta);

}  // namespace regge::io
