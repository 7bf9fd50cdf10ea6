#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "intgeo/crofton.hpp"
#include "intgeo/finsler.hpp"

namespace intgeo {

// All loaders throw std::invalid_argument with a path-like message on
// malformed input; the CLI maps that to a config error.

nlohmann::json load_json_file(const std::string& path);

ChartDomain domain_from_json(const nlohmann::json& doc);

// One space entry: {"type": "trig", "modes": [[[1,0], "cos"], ...]} or
// {"type": "poly", "exponents": [[0,0], [1,0], ...]}. Poly entries accept
// "orthonormalize": true (recommended; monomials are not orthonormal) and
// an optional "orthonormalize_nodes" per-axis count.
FunctionSpace space_from_json(const ChartDomain& domain, const nlohmann::json& doc);

struct SpacesConfig {
  ChartDomain domain;
  std::vector<FunctionSpace> spaces;
};

// Full document: {"domain": {...}, "spaces": [...]}.
SpacesConfig spaces_from_json(const nlohmann::json& doc);
SpacesConfig spaces_from_file(const std::string& path);

// Curve document: {"space": "R2"|"R3"|"S2", "type": "segment"|"circle"|
// "small_circle"|"param", ...}. "param" supplies trigonometric coefficient
// lists ("constant", "cos", "sin"); an optional "rotation" matrix is applied
// last. On S2, "circle" is the great circle and "param" curves are radially
// normalized onto the sphere.
CurveModel curve_from_json(const nlohmann::json& doc);
CurveModel curve_from_file(const std::string& path);

struct ProductCurves {
  CurveModel first;
  CurveModel second;
};

// {"space": "S2xS2", "factors": [<S2 curve>, <S2 curve>]}.
ProductCurves product_curves_from_json(const nlohmann::json& doc);
ProductCurves product_curves_from_file(const std::string& path);

// Bodies for mixed-volume/density runs: {"bodies": [<matrix>, ...]} with an
// optional "frame": [<vector>, ...] (frame vectors as columns).
std::vector<CenteredEllipsoid> bodies_from_json(const nlohmann::json& doc);
Frame frame_from_json(int ambient_dim, const nlohmann::json& doc);

}  // namespace intgeo
