#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wrinkle/vec.hpp"

namespace wrinkle {

enum class ShapeKind { disc, ellipse, half_disc, rectangle, convex_polygon };
const char* to_string(ShapeKind kind);

struct Disc {
    double radius = 1.0;
    Point2 center{};
};

// axis aligned, 0 < b < a
struct Ellipse {
    double a = 2.0;
    double b = 1.0;
    Point2 center{};
};

// orientation is the direction from the centre to the apex of the arc
struct HalfDisc {
    double radius = 1.0;
    Point2 center{};
    double orientation = pi / 2;
};

// half-widths, b <= a, long side along x
struct Rectangle {
    double a = 2.0;
    double b = 1.0;
    Point2 center{};
};

// counter-clockwise, strictly convex
struct ConvexPolygon {
    std::vector<Point2> vertices;
};

enum class PieceKind { segment, circle_arc, ellipse_arc };

// A smooth boundary piece parametrized counter-clockwise by t in [t0, t1]:
// arclength for segments, polar angle for circle arcs, eccentric angle for ellipses.
struct BoundaryPiece {
    PieceKind kind = PieceKind::segment;
    Point2 p0{}, p1{};
    Point2 center{};
    double radius = 0.0;
    double a = 0.0, b = 0.0;
    double t0 = 0.0, t1 = 0.0;
    std::shared_ptr<const std::vector<double>> arc_table;  // ellipse cumulative arclength

    Point2 point(double t) const;
    Vec2 tangent(double t) const;
    Vec2 normal(double t) const;  // outward
    double curvature(double t) const;
    double speed(double t) const;
    double length() const;
    double arclength(double t) const;
    double param_at_arclength(double s) const;
    // closest point on the piece, with its parameter
    std::pair<Point2, double> closest(Point2 x) const;
};

struct BoundaryPoint {
    Point2 position{};
    Vec2 nu{};   // outward unit normal, zero at corners
    Vec2 tau{};  // counter-clockwise unit tangent, zero at corners
    double arclength = 0.0;
    bool corner = false;
    std::size_t piece = 0;
    double param = 0.0;
};

struct NearestPoint {
    Point2 point{};
    std::size_t piece = 0;
    double param = 0.0;
    double distance = 0.0;
};

struct MedialSegment {
    Point2 a{}, b{};
};

// points equidistant from the focus and the directrix {focus + D en + u eu}
struct MedialParabola {
    Point2 focus{};
    Vec2 eu{1.0, 0.0};
    Vec2 en{0.0, 1.0};
    double D = 1.0;
    double u0 = -1.0, u1 = 1.0;
    Point2 point(double u) const;
};

struct MedialVertex {
    Point2 position{};
    int degree = 0;
};

struct MedialAxis {
    std::vector<Point2> points;  // isolated points
    std::vector<MedialSegment> segments;
    std::vector<MedialParabola> parabolas;
    std::vector<MedialVertex> vertices;

    // straight pieces, parabolas subdivided
    std::vector<MedialSegment> polyline(int per_arc = 256) const;
    // points strictly inside the curves (end points excluded), plus isolated points
    std::vector<Point2> sample(double spacing) const;
    double distance(Point2 x) const;
    double length() const;
};

class Domain {
public:
    using Shape = std::variant<Disc, Ellipse, HalfDisc, Rectangle, ConvexPolygon>;

    static Domain disc(double radius, Point2 center = {});
    static Domain ellipse(double a, double b, Point2 center = {});
    static Domain half_disc(double radius, Point2 center = {}, double orientation = pi / 2);
    static Domain rectangle(double a, double b, Point2 center = {});
    static Domain convex_polygon(std::vector<Point2> vertices);

    ShapeKind kind() const;
    const Shape& shape() const { return shape_; }
    std::string describe() const;

    Box bounding_box() const;
    double area() const;
    double perimeter() const;
    double diameter() const;
    Point2 interior_point() const;

    bool contains(Point2 x, double tol = 0.0) const;
    double boundary_distance(Point2 x) const;
    std::vector<NearestPoint> nearest_boundary_points(Point2 x, double tol = 1e-6) const;
    NearestPoint nearest_boundary_point(Point2 x) const;
    Vec2 quickest_exit_gradient(Point2 x) const;

    const std::vector<BoundaryPiece>& pieces() const { return pieces_; }
    std::vector<Point2> corners() const;
    bool is_polygonal() const;
    // outward side normals and offsets, nu_j . x <= c_j inside (polygonal domains)
    const std::vector<Vec2>& side_normals() const { return normals_; }
    const std::vector<double>& side_offsets() const { return offsets_; }
    std::vector<Point2> polygon() const;

    std::vector<BoundaryPoint> boundary_sample(int n) const;
    const MedialAxis& medial_axis() const { return *medial_; }
    // distance from a boundary point along the inward normal to the medial axis
    double exit_length(std::size_t piece, double t) const;

    // frame of the half disc: centre at the origin, arc in the upper half plane
    Point2 to_local(Point2 x) const;
    Point2 to_global(Point2 x) const;
    Vec2 vec_to_local(Vec2 v) const;
    Vec2 vec_to_global(Vec2 v) const;

    bool operator==(const Domain& o) const;

private:
    explicit Domain(Shape s);
    void build();

    Shape shape_;
    Point2 origin_{};
    double rotation_ = 0.0;
    std::vector<BoundaryPiece> pieces_;
    std::vector<Vec2> normals_;
    std::vector<double> offsets_;
    std::shared_ptr<const MedialAxis> medial_;
};

// keep the part of a convex polygon with n . x <= c
std::vector<Point2> clip_halfplane(const std::vector<Point2>& poly, Vec2 n, double c, double tol = 1e-12);
double polygon_area(const std::vector<Point2>& poly);
bool point_in_convex_polygon(const std::vector<Point2>& poly, Point2 x, double tol = 0.0);
// regions P_i of a polygonal domain closest to side i
std::vector<std::vector<Point2>> side_cells(const Domain& domain);
double segment_distance(Point2 x, Point2 a, Point2 b);

}  // namespace wrinkle
