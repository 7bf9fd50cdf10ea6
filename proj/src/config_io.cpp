#include "intgeo/config_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace intgeo {
namespace {

[[noreturn]] void fail(const std::string& message) {
  throw std::invalid_argument("config: " + message);
}

const nlohmann::json& field(const nlohmann::json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) fail(std::string("missing field \"") + key + "\"");
  return *it;
}

std::vector<double> double_list(const nlohmann::json& doc, const char* what) {
  if (!doc.is_array()) fail(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& item : doc) {
    if (!item.is_number()) fail(std::string(what) + " must be an array of numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

Eigen::VectorXd vector_from(const nlohmann::json& doc, const char* what) {
  std::vector<double> values = double_list(doc, what);
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

Eigen::MatrixXd matrix_from(const nlohmann::json& doc, const char* what) {
  if (!doc.is_array() || doc.empty()) fail(std::string(what) + " must be a matrix (array of rows)");
  const auto rows = static_cast<Eigen::Index>(doc.size());
  Eigen::MatrixXd out;
  for (Eigen::Index r = 0; r < rows; ++r) {
    Eigen::VectorXd row = vector_from(doc[static_cast<std::size_t>(r)], what);
    if (r == 0) {
      out.resize(rows, row.size());
    } else if (row.size() != out.cols()) {
      fail(std::string(what) + " has ragged rows");
    }
    out.row(r) = row.transpose();
  }
  return out;
}

FunctionSpace trig_space_from(const ChartDomain& domain, const nlohmann::json& doc) {
  const nlohmann::json& modes = field(doc, "modes");
  if (!modes.is_array() || modes.empty()) fail("trig space needs a nonempty \"modes\" array");
  std::vector<TrigMode> parsed;
  for (const auto& entry : modes) {
    if (!entry.is_array() || entry.size() != 2) {
      fail("each mode must be [wave vector, \"cos\"|\"sin\"]");
    }
    TrigMode mode;
    std::vector<double> wave = double_list(entry[0], "mode wave vector");
    mode.wave.resize(static_cast<Eigen::Index>(wave.size()));
    for (std::size_t i = 0; i < wave.size(); ++i) {
      mode.wave[static_cast<Eigen::Index>(i)] = static_cast<int>(std::lround(wave[i]));
    }
    const std::string kind = entry[1].get<std::string>();
    if (kind == "cos") {
      mode.sine = false;
    } else if (kind == "sin") {
      mode.sine = true;
    } else {
      fail("mode kind must be \"cos\" or \"sin\", got \"" + kind + "\"");
    }
    parsed.push_back(std::move(mode));
  }
  return trig_space(domain, parsed);
}

FunctionSpace poly_space_from(const ChartDomain& domain, const nlohmann::json& doc) {
  const nlohmann::json& exponents = field(doc, "exponents");
  if (!exponents.is_array() || exponents.empty()) {
    fail("poly space needs a nonempty \"exponents\" array");
  }
  std::vector<Eigen::VectorXi> parsed;
  for (const auto& entry : exponents) {
    std::vector<double> exps = double_list(entry, "exponent vector");
    Eigen::VectorXi e(static_cast<Eigen::Index>(exps.size()));
    for (std::size_t i = 0; i < exps.size(); ++i) {
      e[static_cast<Eigen::Index>(i)] = static_cast<int>(std::lround(exps[i]));
    }
    parsed.push_back(std::move(e));
  }
  return poly_space(domain, parsed);
}

TrigCoeffs trig_coeffs_from(const nlohmann::json& doc, int ambient) {
  TrigCoeffs coeffs;
  if (doc.contains("constant")) {
    coeffs.constant = vector_from(doc["constant"], "curve \"constant\"");
  } else {
    coeffs.constant = Eigen::VectorXd::Zero(ambient);
  }
  coeffs.cos_coeff = doc.contains("cos")
                         ? matrix_from(doc["cos"], "curve \"cos\"")
                         : Eigen::MatrixXd::Zero(ambient, 0);
  coeffs.sin_coeff = doc.contains("sin")
                         ? matrix_from(doc["sin"], "curve \"sin\"")
                         : Eigen::MatrixXd::Zero(ambient, 0);
  if (coeffs.constant.size() != ambient || coeffs.cos_coeff.rows() != ambient ||
      coeffs.sin_coeff.rows() != ambient) {
    fail("curve coefficient lists must have one row per coordinate");
  }
  return coeffs;
}

CurveModel single_curve_from(const nlohmann::json& doc) {
  const std::string space = field(doc, "space").get<std::string>();
  const std::string type = field(doc, "type").get<std::string>();

  CurveModel curve;
  if (space == "R2" || space == "R3") {
    const int ambient = space == "R2" ? 2 : 3;
    if (type == "segment") {
      Eigen::VectorXd from = vector_from(field(doc, "from"), "segment \"from\"");
      Eigen::VectorXd to = vector_from(field(doc, "to"), "segment \"to\"");
      if (from.size() != ambient || to.size() != ambient) {
        fail("segment endpoints must match the ambient dimension");
      }
      curve = segment_curve(from, to);
    } else if (type == "circle") {
      curve = circle_curve(ambient, doc.value("radius", 1.0));
    } else if (type == "param") {
      curve = trig_curve(trig_coeffs_from(doc, ambient));
    } else {
      fail("unknown curve type \"" + type + "\" for space " + space);
    }
  } else if (space == "S2") {
    if (type == "circle") {
      curve = great_circle();
    } else if (type == "small_circle") {
      curve = small_circle(field(doc, "colatitude").get<double>());
    } else if (type == "param") {
      curve = sphere_trig_curve(trig_coeffs_from(doc, 3));
    } else {
      fail("unknown curve type \"" + type + "\" for space S2");
    }
  } else {
    fail("unknown curve space \"" + space + "\"");
  }

  if (doc.contains("rotation")) {
    curve = rotated_curve(curve, matrix_from(doc["rotation"], "curve \"rotation\""));
  }
  return curve;
}

}  // namespace

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open \"" + path + "\"");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& err) {
    fail("\"" + path + "\": " + err.what());
  }
  return doc;
}

ChartDomain domain_from_json(const nlohmann::json& doc) {
  const std::string kind = field(doc, "kind").get<std::string>();
  const int dim = field(doc, "dim").get<int>();
  if (dim < 1) fail("domain dim must be >= 1");
  if (kind == "torus") {
    std::vector<double> periods;
    if (doc.contains("periods")) {
      periods = double_list(doc["periods"], "\"periods\"");
      if (static_cast<int>(periods.size()) != dim) fail("\"periods\" length must equal dim");
    }
    return ChartDomain::torus(dim, periods);
  }
  if (kind == "box") {
    const nlohmann::json& bounds = field(doc, "bounds");
    if (!bounds.is_array() || static_cast<int>(bounds.size()) != dim) {
      fail("\"bounds\" must list [lo, hi] per coordinate");
    }
    std::vector<double> lower, upper;
    for (const auto& pair : bounds) {
      std::vector<double> b = double_list(pair, "bound pair");
      if (b.size() != 2) fail("each bound must be [lo, hi]");
      lower.push_back(b[0]);
      upper.push_back(b[1]);
    }
    return ChartDomain::box(lower, upper);
  }
  fail("domain kind must be \"torus\" or \"box\", got \"" + kind + "\"");
}

FunctionSpace space_from_json(const ChartDomain& domain, const nlohmann::json& doc) {
  const std::string type = field(doc, "type").get<std::string>();
  FunctionSpace space = [&] {
    if (type == "trig") return trig_space_from(domain, doc);
    if (type == "poly") return poly_space_from(domain, doc);
    fail("space type must be \"trig\" or \"poly\", got \"" + type + "\"");
  }();
  if (doc.value("orthonormalize", false)) {
    const int nodes = doc.value("orthonormalize_nodes", 64);
    space = orthonormalize(space, std::vector<int>(domain.dim(), nodes));
  }
  return space;
}

SpacesConfig spaces_from_json(const nlohmann::json& doc) {
  ChartDomain domain = domain_from_json(field(doc, "domain"));
  const nlohmann::json& list = field(doc, "spaces");
  if (!list.is_array() || list.empty()) fail("\"spaces\" must be a nonempty array");
  SpacesConfig config{domain, {}};
  for (const auto& entry : list) {
    config.spaces.push_back(space_from_json(domain, entry));
  }
  return config;
}

SpacesConfig spaces_from_file(const std::string& path) {
  return spaces_from_json(load_json_file(path));
}

CurveModel curve_from_json(const nlohmann::json& doc) {
  const std::string space = field(doc, "space").get<std::string>();
  if (space == "S2xS2") fail("product curves must be loaded with product_curves_from_json");
  return single_curve_from(doc);
}

CurveModel curve_from_file(const std::string& path) {
  return curve_from_json(load_json_file(path));
}

ProductCurves product_curves_from_json(const nlohmann::json& doc) {
  const std::string space = field(doc, "space").get<std::string>();
  if (space != "S2xS2") fail("product curve document must declare \"space\": \"S2xS2\"");
  const nlohmann::json& factors = field(doc, "factors");
  if (!factors.is_array() || factors.size() != 2) {
    fail("\"factors\" must list exactly two S2 curves");
  }
  auto factor = [](nlohmann::json entry) {
    if (!entry.contains("space")) entry["space"] = "S2";
    if (entry["space"].get<std::string>() != "S2") fail("product factors must live on S2");
    return single_curve_from(entry);
  };
  return ProductCurves{factor(factors[0]), factor(factors[1])};
}

ProductCurves product_curves_from_file(const std::string& path) {
  return product_curves_from_json(load_json_file(path));
}

std::vector<CenteredEllipsoid> bodies_from_json(const nlohmann::json& doc) {
  const nlohmann::json& list = field(doc, "bodies");
  if (!list.is_array() || list.empty()) fail("\"bodies\" must be a nonempty array of matrices");
  std::vector<CenteredEllipsoid> bodies;
  for (const auto& entry : list) {
    bodies.emplace_back(matrix_from(entry, "body matrix"));
  }
  return bodies;
}

Frame frame_from_json(int ambient_dim, const nlohmann::json& doc) {
  if (!doc.is_array() || doc.empty()) fail("\"frame\" must be a nonempty array of vectors");
  std::vector<Eigen::VectorXd> columns;
  for (const auto& entry : doc) {
    Eigen::VectorXd v = vector_from(entry, "frame vector");
    if (v.size() != ambient_dim) fail("frame vectors must match the body dimension");
    columns.push_back(std::move(v));
  }
  return Frame(ambient_dim, columns);
}

}  // namespace intgeo
