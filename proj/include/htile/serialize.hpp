#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "htile/error.hpp"
#include "htile/fractional.hpp"
#include "htile/graph_io.hpp"
#include "htile/params.hpp"
#include "htile/patterns.hpp"
#include "htile/rational.hpp"
#include "htile/tiling.hpp"

// JSON forms of results. Rationals are strings "p/q" (or "p").

namespace htile {

namespace detail {

inline Rational rational_from_json(const json& node, const std::string& where) {
  if (node.is_string()) return parse_rational(node.get<std::string>());
  if (node.is_number_integer()) return Rational(node.get<long>());
  throw ParseError(where + ": expected a rational string \"p/q\"");
}

inline std::vector<Vertex> vertex_list(const json& node, const std::string& where) {
  if (!node.is_array()) throw ParseError(where + ": expected a list of vertex indices");
  std::vector<Vertex> out;
  for (std::size_t k = 0; k < node.size(); ++k) {
    long long v = read_int(node[k], where + "[" + std::to_string(k) + "]");
    if (v < 0) throw ParseError(where + "[" + std::to_string(k) + "]: negative vertex index");
    out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

}  // namespace detail

inline json to_json(const ChromaticProfile& p) {
  json diffs = json::array();
  for (long d : p.difference_set) diffs.push_back(d);
  json out = {{"h", p.h},
              {"r", p.r},
              {"size_multisets", p.size_multisets},
              {"difference_set", diffs},
              {"sigma", to_string(p.sigma)},
              {"chi_cr", to_string(p.chi_cr)},
              {"chi_star", to_string(p.chi_star)},
              {"a", to_string(p.a)},
              {"b", to_string(p.b)}};
  out["gcd"] = p.gcd.is_infinite() ? json("inf") : json(p.gcd.value());
  return out;
}

// [{"vertices": [...], "root": v, "weight": "p/q"}, ...]
inline json to_json(const FractionalTiling& t) {
  json weights = json::array();
  for (const auto& [k, w] : t.weights) {
    weights.push_back({{"vertices", k.vertices}, {"root", k.root}, {"weight", to_string(w)}});
  }
  return weights;
}

inline FractionalTiling fractional_tiling_from_json(const json& node, bool perfect = true) {
  if (!node.is_array()) throw ParseError("weights: expected a list");
  FractionalTiling t;
  t.perfect = perfect;
  for (std::size_t k = 0; k < node.size(); ++k) {
    const std::string where = "weights[" + std::to_string(k) + "]";
    const json& item = node[k];
    if (!item.is_object() || !item.contains("vertices") || !item.contains("root") || !item.contains("weight")) {
      throw ParseError(where + ": expected {\"vertices\", \"root\", \"weight\"}");
    }
    WeightedRootedClique c;
    c.vertices = detail::vertex_list(item["vertices"], where + ".vertices");
    long long root = detail::read_int(item["root"], where + ".root");
    if (root < 0) throw ParseError(where + ".root: negative vertex index");
    c.root = static_cast<Vertex>(root);
    t.weights.emplace_back(std::move(c), detail::rational_from_json(item["weight"], where + ".weight"));
  }
  return t;
}

inline json to_json(const FarkasCertificate& c) {
  json x = json::array();
  for (const auto& v : c.x) x.push_back(to_string(v));
  return x;
}

inline FarkasCertificate farkas_certificate_from_json(const json& node) {
  if (!node.is_array()) throw ParseError("certificate: expected a list");
  FarkasCertificate c;
  for (std::size_t k = 0; k < node.size(); ++k) {
    c.x.push_back(detail::rational_from_json(node[k], "certificate[" + std::to_string(k) + "]"));
  }
  return c;
}

// One list per copy; entry k is the host vertex that H-vertex k maps to.
inline json to_json(const Tiling& t) {
  json copies = json::array();
  for (const auto& c : t.copies) copies.push_back(c.witness);
  return copies;
}

inline Tiling tiling_from_json(const json& node) {
  if (!node.is_array()) throw ParseError("tiling: expected a list of copies");
  Tiling t;
  for (std::size_t k = 0; k < node.size(); ++k) {
    HCopy c;
    c.witness = detail::vertex_list(node[k], "tiling[" + std::to_string(k) + "]");
    c.image = c.witness;
    std::sort(c.image.begin(), c.image.end());
    t.copies.push_back(std::move(c));
  }
  return t;
}

inline json to_json(const PatternSolution& s) { return {{"patterns", s.patterns}, {"counts", s.counts}}; }

}  // namespace htile
