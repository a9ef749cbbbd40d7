#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmlab/geometry.hpp"

namespace rmlab {

enum class Region : unsigned char { Exterior, Defect };
enum class BoundaryTag : unsigned char { Outer, Defect };

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundaryEdge {
  int a = -1;
  int b = -1;
  BoundaryTag tag = BoundaryTag::Outer;
};

/// Conforming triangulation of the plate mid-plane with the defect region
/// resolved as a tagged submesh. Immutable after construction; queries are
/// pure and safe to call concurrently.
struct Mesh {
  std::vector<Point2> nodes;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<Region> tri_region;
  std::vector<BoundaryEdge> boundary_edges;
  double characteristic_size = 0.0;  // max edge length

  int node_count() const { return static_cast<int>(nodes.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }

  double triangle_area(int t) const {
    const auto& tri = triangles[t];
    return triangle_signed_area(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
  }
  Point2 triangle_centroid(int t) const {
    const auto& tri = triangles[t];
    return (1.0 / 3.0) * (nodes[tri[0]] + nodes[tri[1]] + nodes[tri[2]]);
  }

  double total_area() const;
  double defect_area() const;
  bool has_defect() const;

  /// Exact distance from a point to the Outer boundary polyline.
  double distance_to_outer_boundary(Point2 p) const;

  /// Ordered closed node loops of the given tag, CCW oriented.
  std::vector<std::vector<int>> boundary_loops(BoundaryTag tag) const;

  /// Throws MeshError if any structural invariant fails.
  void validate() const;
};

enum class DomainShape : unsigned char { Rectangle, Disc };

/// A-priori description of the plate domain. rho0/L0/Q0 are the Lipschitz
/// scale, Lipschitz slope and diameter ratio of the outer boundary; when
/// rho0 <= 0 they are filled from the verified closed-form table.
struct DomainSpec {
  DomainShape shape = DomainShape::Rectangle;
  double width = 1.0;    // rectangle
  double height = 1.0;   // rectangle
  double radius = 1.0;   // disc
  Point2 origin{0.0, 0.0};
  int segments = 64;     // inscribed polygon resolution for disc boundaries
  double rho0 = 0.0;
  double L0 = 0.0;
  double Q0 = 0.0;

  double diameter() const;
  /// Fill rho0/L0/Q0 from the shape table where unset. Enforces
  /// diam <= Q0*rho0 and origin membership.
  void finalize();
};

enum class DefectShape : unsigned char { Disc, Rectangle, Polygon };

struct DefectSpec {
  DefectShape shape = DefectShape::Rectangle;
  Point2 center{0.0, 0.0};
  double width = 0.0;   // rectangle
  double height = 0.0;  // rectangle
  double radius = 0.0;  // disc
  std::vector<Point2> vertices;  // polygon
  // Required for Polygon (no closed-form table entry exists):
  double user_r = 0.0;
  double user_L = 0.0;
};

/// Geometric parameters of the defect per the Lipschitz-class table.
struct DefectGeometry {
  DefectShape shape = DefectShape::Rectangle;
  double r_D = 0.0;
  double L_D = 0.0;
  double Q_D = 0.0;
  double diam = 0.0;
  double dist_to_outer = 0.0;
  double d0 = 0.0;  // dist_to_outer / rho0
};

/// Closed-form Lipschitz parameters for the canonical shapes:
///   disc radius r          -> (r_D = r/sqrt(2), L_D = 3/2)
///   rectangle a x b        -> (r_D = min(a,b)/4, L_D = 2)
/// Both entries are verified against the graph definition in the test suite.
DefectGeometry defect_parameters(const DefectSpec& defect, const DomainSpec& domain);

/// Builds the structured block mesh of the domain with the optional defect
/// resolved as a tagged submesh. Grid pitch is at most target_h on every
/// axis/ring (triangle diagonals may exceed it by sqrt(2)).
Mesh build_plate_mesh(const DomainSpec& domain,
                      const std::optional<DefectSpec>& defect, double target_h);

/// Uniform quadrisection by edge midpoints. Region and boundary tags are
/// inherited; children of boundary edge e sit at indices 2e and 2e+1.
Mesh refine(const Mesh& mesh);

/// Area of {x in D : dist(x, outer boundary) > threshold}, by adaptive
/// quadrature over Defect triangles with exact point-to-segment distances.
double fatness_measure(const Mesh& mesh, double threshold);

/// Minimum distance between the defect boundary and the outer boundary.
double defect_outer_distance(const Mesh& mesh);

/// Standalone mesh of one region's triangles (nodes renumbered, boundary
/// re-derived; all triangles tagged Exterior).
Mesh extract_submesh(const Mesh& mesh, Region region);

Mesh import_mesh(std::istream& in);
Mesh import_mesh_text(const std::string& text);
Mesh import_mesh_file(const std::string& path);
void export_mesh(const Mesh& mesh, std::ostream& out);
std::string export_mesh_text(const Mesh& mesh);
void export_mesh_file(const Mesh& mesh, const std::string& path);

}  // namespace rmlab
