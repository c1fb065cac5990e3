#include "regge/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "regge/errors.hpp"

namespace regge::io {

namespace {

std::vector<std::string> split_path(const std::string& dotted) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : dotted) {
    if (c == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

const json* find(const json& doc, const std::string& dotted) {
  const json* node = &doc;
  for (const auto& part : split_path(dotted)) {
    if (!node->is_object() || !node->contains(part)) return nullptr;
    node = &(*node)[part];
  }
  return node;
}

}  // namespace

bool RunConfig::has(const std::string& dotted) const {
  return find(doc, dotted) != nullptr;
}

double RunConfig::number(const std::string& dotted, double fallback) const {
  const json* n = find(doc, dotted);
  if (!n) return fallback;
  if (!n->is_number()) throw ValidationError("expected a number at " + dotted, dotted);
  return n->get<double>();
}

double RunConfig::required_number(const std::string& dotted) const {
  const json* n = find(doc, dotted);
  if (!n) throw ValidationError("missing required config key " + dotted, dotted);
  if (!n->is_number()) throw ValidationError("expected a number at " + dotted, dotted);
  return n->get<double>();
}

int RunConfig::integer(const std::string& dotted, int fallback) const {
  const json* n = find(doc, dotted);
  if (!n) return fallback;
  if (!n->is_number_integer()) throw ValidationError("expected an integer at " + dotted, dotted);
  return n->get<int>();
}

int RunConfig::required_integer(const std::string& dotted) const {
  const json* n = find(doc, dotted);
  if (!n) throw ValidationError("missing required config key " + dotted, dotted);
  if (!n->is_number_integer()) throw ValidationError("expected an integer at " + dotted, dotted);
  return n->get<int>();
}

bool RunConfig::boolean(const std::string& dotted, bool fallback) const {
  const json* n = find(doc, dotted);
  if (!n) return fallback;
  if (!n->is_boolean()) throw ValidationError("expected a boolean at " + dotted, dotted);
  return n->get<bool>();
}

std::string RunConfig::text(const std::string& dotted, const std::string& fallback) const {
  const json* n = find(doc, dotted);
  if (!n) return fallback;
  if (!n->is_string()) throw ValidationError("expected a string at " + dotted, dotted);
  return n->get<std::string>();
}

void RunConfig::apply_override(const std::string& dotted, const std::string& value) {
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (...) {
    parsed = value;  // bare strings allowed
  }
  json* node = &doc;
  const auto parts = split_path(dotted);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i]) || !(*node)[parts[i]].is_object())
      (*node)[parts[i]] = json::object();
    node = &(*node)[parts[i]];
  }
  (*node)[parts.back()] = parsed;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path, "config");
  RunConfig cfg;
  try {
    in >> cfg.doc;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("config parse error: ") + e.what(), "config");
  }
  if (!cfg.doc.is_object())
    throw ValidationError("config root must be a JSON object", "config");
  return cfg;
}

model::WarpSpec warp_from_config(const RunConfig& cfg) {
  model::WarpSpec spec;
  spec.n = cfg.required_integer("warp.n");
  spec.lambda = cfg.required_number("warp.lambda");
  spec.a = cfg.required_number("warp.a");
  spec.p = cfg.required_integer("warp.p");
  const json* bps = find(cfg.doc, "warp.breakpoints");
  const json* cfs = find(cfg.doc, "warp.coefficients");
  if (bps && cfs) {
    if (!bps->is_array())
      throw ValidationError("warp.breakpoints must be an array", "warp.breakpoints");
    if (!cfs->is_array())
      throw ValidationError("warp.coefficients must be an array of arrays", "warp.coefficients");
    for (const auto& b : *bps) spec.V.breakpoints.push_back(b.get<double>());
    for (const auto& row : *cfs) {
      std::vector<double> c;
      for (const auto& v : row) c.push_back(v.get<double>());
      spec.V.coeff.push_back(std::move(c));
    }
  }
  spec.validate(cfg.boolean("numerics.debug_lambda_zero", false));
  return spec;
}

std::string config_hash(const RunConfig& cfg) {
  const std::string canon = cfg.doc.dump();  // nlohmann objects are key-sorted
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw DataError("write_csv: row width does not match header in " + path);
    for (double v : row)
      if (!std::isfinite(v))
        throw DataError("write_csv: non-finite value rejected in " + path);
  }
  std::ofstream out(path, std::ios::binary);  // fixed \n endings
  if (!out) throw DataError("write_csv: cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "");
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << format_g17(row[i]) << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("write_json: cannot open " + path);
  out << doc.dump(2) << "\n";
}

void write_pole_csv(const std::string& path,
                    const std::vector<poles::ReggePole>& ps) {
  for (const auto& p : ps)
    if (!std::isfinite(p.location.real()) || !std::isfinite(p.location.imag()) ||
        !std::isfinite(p.residue.real()) || !std::isfinite(p.residue.imag()))
      throw DataError("write_pole_csv: non-finite value rejected in " + path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("write_pole_csv: cannot open " + path);
  out << "re,im,multiplicity,family,res_re,res_im,winding\n";
  for (const auto& p : ps) {
    out << format_g17(p.location.real()) << "," << format_g17(p.location.imag())
        << "," << p.multiplicity << "," << poles::family_name(p.family) << ","
        << format_g17(p.residue.real()) << "," << format_g17(p.residue.imag())
        << "," << p.winding << "\n";
  }
}

json pole_json(const std::vector<poles::ReggePole>& ps, const json& meta) {
  json arr = json::array();
  for (const auto& p : ps) {
    arr.push_back({{"re", p.location.real()},
                   {"im", p.location.imag()},
                   {"multiplicity", p.multiplicity},
                   {"family", poles::family_name(p.family)},
                   {"res_re", p.residue.real()},
                   {"res_im", p.residue.imag()},
                   {"winding", p.winding}});
  }
  return json{{"meta", meta}, {"poles", arr}};
}

}  // namespace regge::io
