#include "vsuq/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vsuq/error.hpp"
#include "vsuq/numerics.hpp"

namespace vsuq {

std::array<double, 4> Mesh::bounds() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::array<double, 4> b{inf, inf, -inf, -inf};
  for (const auto& p : nodes) {
    b[0] = std::min(b[0], p[0]);
    b[1] = std::min(b[1], p[1]);
    b[2] = std::max(b[2], p[0]);
    b[3] = std::max(b[3], p[1]);
  }
  return b;
}

std::vector<int> Mesh::nodes_on_line(int axis, double value, double tol) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (std::abs(nodes[i][axis] - value) <= tol) out.push_back(static_cast<int>(i));
  }
  return out;
}

int Mesh::nearest_node(double x, double y) const {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double d = std::hypot(nodes[i][0] - x, nodes[i][1] - y);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

void Mesh::validate() const {
  if (nodes.empty() || elements.empty()) throw MeshError("mesh has no nodes or elements");
  const int n = static_cast<int>(nodes.size());
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const auto& el = elements[e];
    for (int k = 0; k < 4; ++k) {
      if (el[k] < 0 || el[k] >= n) throw MeshError("element " + std::to_string(e) + " references a missing node");
    }
    // Jacobian sign at the four corners of the reference square.
    for (int k = 0; k < 4; ++k) {
      const auto& p0 = nodes[el[k]];
      const auto& p1 = nodes[el[(k + 1) % 4]];
      const auto& p3 = nodes[el[(k + 3) % 4]];
      const double cross = (p1[0] - p0[0]) * (p3[1] - p0[1]) - (p1[1] - p0[1]) * (p3[0] - p0[0]);
      if (!(cross > 0.0)) throw MeshError("element " + std::to_string(e) + " has a non-positive Jacobian");
    }
  }
}

Mesh rectangle_mesh(int nx, int ny, double lx, double ly, double x0, double y0) {
  if (nx < 1 || ny < 1 || !(lx > 0) || !(ly > 0)) throw ConfigError("invalid rectangle mesh parameters");
  Mesh m;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      m.nodes.push_back({x0 + lx * i / nx, y0 + ly * j / ny});
    }
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      m.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return m;
}

Mesh hole_plate_mesh(int n_side, int n_radial, double size, double radius) {
  if (n_side < 1 || n_radial < 1) throw ConfigError("hole plate mesh needs positive element counts");
  if (!(radius > 0.0) || !(radius < 0.5 * size)) throw ConfigError("hole radius must lie in (0, size/2)");
  Mesh m;
  const int ring = 4 * n_side;
  const double c = 0.5 * size, h = 0.5 * size;
  for (int j = 0; j <= n_radial; ++j) {
    const double s = static_cast<double>(j) / n_radial;
    for (int a = 0; a < ring; ++a) {
      const int block = a / n_side;
      const double t = static_cast<double>(a % n_side) / n_side;
      const double rot = block * num::kPi / 2;
      const double phi = -num::kPi / 4 + t * num::kPi / 2 + rot;
      // Point on the block's straight outer side before rotation: (1, -1 + 2t).
      const double ox = 1.0, oy = -1.0 + 2.0 * t;
      const double outer_x = h * (ox * std::cos(rot) - oy * std::sin(rot));
      const double outer_y = h * (ox * std::sin(rot) + oy * std::cos(rot));
      const double inner_x = radius * std::cos(phi), inner_y = radius * std::sin(phi);
      m.nodes.push_back({c + (1 - s) * inner_x + s * outer_x, c + (1 - s) * inner_y + s * outer_y});
    }
  }
  // Snap the outer boundary exactly onto the square.
  for (auto& p : m.nodes) {
    for (auto& v : p) {
      if (std::abs(v) < 1e-12) v = 0.0;
      if (std::abs(v - size) < 1e-12) v = size;
    }
  }
  auto id = [ring](int j, int a) { return j * ring + (a % ring); };
  for (int j = 0; j < n_radial; ++j) {
    for (int a = 0; a < ring; ++a) {
      m.elements.push_back({id(j, a), id(j + 1, a), id(j + 1, a + 1), id(j, a + 1)});
    }
  }
  return m;
}

}  // namespace vsuq
