#pragma once

#include <array>
#include <vector>

namespace vsuq {

/// Planar quadrilateral mesh; elements list 4 node indices counterclockwise.
struct Mesh {
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 4>> elements;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t element_count() const { return elements.size(); }

  /// Bounding box (xmin, ymin, xmax, ymax).
  std::array<double, 4> bounds() const;
  /// Nodes with |coord - value| <= tol along axis 0 (x) or 1 (y).
  std::vector<int> nodes_on_line(int axis, double value, double tol = 1e-9) const;
  /// Node closest to (x, y); lowest index on ties.
  int nearest_node(double x, double y) const;
  /// Throws MeshError on bad connectivity or non-positive Jacobians.
  void validate() const;
};

/// nx by ny structured mesh of [x0, x0 + lx] x [y0, y0 + ly].
Mesh rectangle_mesh(int nx, int ny, double lx, double ly, double x0 = 0.0, double y0 = 0.0);

/// Square plate [0, size]^2 with a centred circular hole, meshed as a four-block
/// O-grid: n_side elements along each quarter arc, n_radial between hole and edge.
Mesh hole_plate_mesh(int n_side, int n_radial, double size, double radius);

}  // namespace vsuq
