#include "vsuq/case_config.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "vsuq/error.hpp"
#include "vsuq/numerics.hpp"

namespace vsuq {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
}

const json& section(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_object()) throw ConfigError(std::string("config lacks the '") + key + "' section");
  return j[key];
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("config key '" + where + "." + key + "' is missing");
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + where + "." + key + "' has the wrong type");
  }
}

template <typename T>
T get_or(const json& j, const std::string& key, const std::string& where, T fallback) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

int direction_dof(const std::string& d) {
  if (d == "x") return U;
  if (d == "y") return V;
  if (d == "z") return W;
  throw ConfigError("load direction must be x, y or z, got '" + d + "'");
}

std::vector<int> edge_nodes(const Mesh& mesh, const std::string& edge) {
  const auto b = mesh.bounds();
  const double tol = 1e-9 * std::max(b[2] - b[0], b[3] - b[1]);
  if (edge == "left") return mesh.nodes_on_line(0, b[0], tol);
  if (edge == "right") return mesh.nodes_on_line(0, b[2], tol);
  if (edge == "bottom") return mesh.nodes_on_line(1, b[1], tol);
  if (edge == "top") return mesh.nodes_on_line(1, b[3], tol);
  throw ConfigError("edge must be left, right, bottom or top, got '" + edge + "'");
}

// Work-equivalent nodal forces of a uniform line load along a straight edge.
void edge_traction(const Mesh& mesh, const std::string& edge, int dof, double q, std::vector<NodalLoad>& loads) {
  std::vector<int> nodes = edge_nodes(mesh, edge);
  const int axis = (edge == "left" || edge == "right") ? 1 : 0;
  std::sort(nodes.begin(), nodes.end(), [&](int a, int b) { return mesh.nodes[a][axis] < mesh.nodes[b][axis]; });
  if (nodes.size() < 2) throw ConfigError("edge '" + edge + "' has fewer than two nodes");
  std::vector<double> f(nodes.size(), 0.0);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double len = mesh.nodes[nodes[i + 1]][axis] - mesh.nodes[nodes[i]][axis];
    f[i] += 0.5 * q * len;
    f[i + 1] += 0.5 * q * len;
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) loads.push_back({nodes[i], dof, f[i]});
}

std::unique_ptr<LaminateModel> build_model(const json& j) {
  const json& geo = section(j, "geometry");
  const std::string type = get<std::string>(geo, "type", "geometry");
  Mesh mesh;
  if (type == "hole_plate") {
    mesh = hole_plate_mesh(get<int>(geo, "n_side", "geometry"), get<int>(geo, "n_radial", "geometry"),
                           get<double>(geo, "size", "geometry"), get<double>(geo, "hole_radius", "geometry"));
  } else if (type == "rectangle") {
    mesh = rectangle_mesh(get<int>(geo, "nx", "geometry"), get<int>(geo, "ny", "geometry"),
                          get<double>(geo, "length", "geometry"), get<double>(geo, "height", "geometry"));
  } else {
    throw ConfigError("geometry.type must be hole_plate or rectangle, got '" + type + "'");
  }

  const json& mat = section(j, "material");
  MaterialProps m;
  m.E_L = get<double>(mat, "E_L", "material");
  m.E_T = get<double>(mat, "E_T", "material");
  m.nu_LT = get<double>(mat, "nu_LT", "material");
  m.G_LT = get<double>(mat, "G_LT", "material");
  m.G_TN = get<double>(mat, "G_TN", "material");
  m.G_LN = get<double>(mat, "G_LN", "material");
  m = m.scaled(get_or<double>(mat, "modulus_scale", "material", 1.0));

  const json& lam = section(j, "laminate");
  const std::string kind = get<std::string>(lam, "path_kind", "laminate");
  PathKind pk;
  if (kind == "quadratic") {
    pk = PathKind::Quadratic;
  } else if (kind == "cubic") {
    pk = PathKind::Cubic;
  } else {
    throw ConfigError("laminate.path_kind must be quadratic or cubic");
  }
  const auto paths = get<std::vector<std::vector<double>>>(lam, "paths", "laminate");
  if (paths.empty()) throw ConfigError("laminate.paths is empty");
  const double total = get<double>(lam, "total_thickness", "laminate");
  std::vector<Ply> plies;
  for (const auto& coeffs : paths) plies.push_back({total / static_cast<double>(paths.size()), PathFunction(pk, coeffs)});

  ModelOptions opt;
  opt.theta_T = get_or<double>(lam, "theta_T_deg", "laminate", 0.0) * num::kPi / 180.0;
  opt.deviation_cap = get_or<double>(lam, "deviation_cap_deg", "laminate", 90.0) * num::kPi / 180.0;
  opt.normalize_path_coordinates = get_or<bool>(lam, "normalize_path_coordinates", "laminate", true);
  const std::string shear = get_or<std::string>(lam, "shear_integration", "laminate", "reduced");
  if (shear == "reduced") {
    opt.shear = ShearRule::Reduced;
  } else if (shear == "full") {
    opt.shear = ShearRule::Full;
  } else {
    throw ConfigError("laminate.shear_integration must be reduced or full");
  }

  const json& bnd = section(j, "boundary");
  std::vector<DirichletBC> bcs;
  for (const auto& edge : get<std::vector<std::string>>(bnd, "clamped_edges", "boundary")) {
    for (int n : edge_nodes(mesh, edge)) {
      for (int d = 0; d < kDofsPerNode; ++d) bcs.push_back({n, d, 0.0});
    }
  }

  if (!j.contains("loads") || !j["loads"].is_array()) throw ConfigError("config lacks the 'loads' array");
  std::vector<NodalLoad> loads;
  for (const auto& l : j["loads"]) {
    const std::string lt = get<std::string>(l, "type", "loads[]");
    const int dof = direction_dof(get<std::string>(l, "direction", "loads[]"));
    const double mag = get<double>(l, "magnitude", "loads[]");
    if (lt == "edge_traction") {
      edge_traction(mesh, get<std::string>(l, "edge", "loads[]"), dof, mag, loads);
    } else if (lt == "point") {
      loads.push_back({mesh.nearest_node(get<double>(l, "x", "loads[]"), get<double>(l, "y", "loads[]")), dof, mag});
    } else {
      throw ConfigError("load type must be edge_traction or point, got '" + lt + "'");
    }
  }
  return std::make_unique<LaminateModel>(std::move(mesh), PlyStack(std::move(plies)), m, std::move(bcs),
                                         std::move(loads), opt);
}

McsConfig build_sampling(const json& j) {
  McsConfig cfg;
  const json& vine = section(j, "vine");
  const auto taus = get<std::vector<double>>(vine, "tree1_taus", "vine");
  const CopulaFamily fam = copula_family_from_string(get<std::string>(vine, "family", "vine"));
  cfg.vine = spec_from_taus(static_cast<int>(taus.size()) + 1, taus, get<double>(vine, "deep_tau", "vine"), fam);
  if (j.contains("deviation")) {
    const json& dev = j["deviation"];
    const MarginalFamily mf = marginal_family_from_string(get<std::string>(dev, "family", "deviation"));
    cfg.deviation = MarginalModel(mf, get<std::vector<double>>(dev, "params", "deviation"));
    const std::string units = get_or<std::string>(dev, "units", "deviation", "radians");
    if (units != "radians" && units != "degrees") throw ConfigError("deviation.units must be radians or degrees");
    cfg.degrees = units == "degrees";
  }
  if (j.contains("mcs")) {
    const json& mc = j["mcs"];
    const auto samples = get_or<long long>(mc, "samples", "mcs", 10000);
    if (samples < 1) throw ConfigError("mcs.samples must be at least 1");
    cfg.samples = static_cast<std::size_t>(samples);
    cfg.seed = get_or<std::uint64_t>(mc, "seed", "mcs", 1);
    cfg.evaluator = evaluator_from_string(get_or<std::string>(mc, "evaluator", "mcs", "reanalysis"));
    cfg.basis_size = get_or<int>(mc, "basis_size", "mcs", 6);
    cfg.threads = get_or<int>(mc, "threads", "mcs", 1);
  }
  return cfg;
}

}  // namespace

std::unique_ptr<LaminateModel> parse_model(const std::string& text) { return build_model(parse_json(text)); }

McsConfig parse_sampling(const std::string& text) { return build_sampling(parse_json(text)); }

CaseConfig parse_case(const std::string& text) {
  const json j = parse_json(text);
  CaseConfig c;
  c.name = get_or<std::string>(j, "name", "", "case");
  c.model = build_model(j);
  c.mcs = build_sampling(j);
  if (c.mcs.vine.dimension() != static_cast<int>(c.model->ply_count())) {
    throw ConfigError("vine dimension does not match the ply count");
  }
  if (j.contains("surrogate")) {
    const json& s = j["surrogate"];
    c.train.hidden = get_or<int>(s, "hidden", "surrogate", c.train.hidden);
    c.train.epochs = get_or<int>(s, "epochs", "surrogate", c.train.epochs);
    c.train.learning_rate = get_or<double>(s, "learning_rate", "surrogate", c.train.learning_rate);
    c.train.momentum = get_or<double>(s, "momentum", "surrogate", c.train.momentum);
    c.train.decay = get_or<double>(s, "decay", "surrogate", c.train.decay);
    c.train.seed = get_or<std::uint64_t>(s, "seed", "surrogate", c.mcs.seed);
    c.train_samples = static_cast<std::size_t>(get_or<long long>(s, "train_samples", "surrogate", 10000));
    c.sweep = get_or<std::vector<int>>(s, "sweep", "surrogate", c.sweep);
  } else {
    c.train.seed = c.mcs.seed;
  }
  return c;
}

std::vector<std::vector<double>> hole_plate_coefficients() {
  return {{-2.879, 0.527, -0.015, -9.989}, {2.879, -0.527, -0.015, -9.989}, {6.270, -0.656, -1.745, 7.811},
          {-6.270, 0.656, -1.745, 7.811},  {7.258, -0.069, 4.087, 17.191},  {-7.258, 0.069, 4.087, 17.191},
          {14.227, 2.586, -2.127, 10.519}, {-14.227, -2.586, -2.127, 10.519}};
}

std::vector<std::vector<double>> beam_coefficients() {
  return {{10.61, -0.5563, -0.053, -1.6845, 1.0153, 1.248, 0.3073, 0.6024},
          {10.61, 0.5563, -0.053, -1.6845, 1.0153, -1.248, -0.3073, 0.6024},
          {5.402, 1.846, 0.3601, -0.2195, 0.3203, 0.9506, 0.0481, 2.975},
          {5.402, -1.846, 0.3601, -0.2195, 0.3203, -0.9506, -0.0481, 2.975}};
}

}  // namespace vsuq
