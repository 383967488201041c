#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace orthotile {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 lerp(Point2 a, Point2 b, double t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

using Polyline = std::vector<Point2>;

struct BBox {
    Point2 lo{};
    Point2 hi{};
};

enum class Containment { inside, boundary, outside };

// Simple polygon, stored counterclockwise. Clockwise input is reversed.
class Polygon {
public:
    explicit Polygon(std::vector<Point2> vertices);

    const std::vector<Point2>& vertices() const { return v_; }
    std::size_t size() const { return v_.size(); }
    Point2 vertex(std::size_t i) const { return v_[i % v_.size()]; }
    // Edge i runs from vertex(i) to vertex(i+1).
    std::array<Point2, 2> edge(std::size_t i) const { return {vertex(i), vertex(i + 1)}; }

    double area() const { return area_; }
    double diameter() const { return diameter_; }
    double perimeter() const;
    Point2 centroid() const;
    BBox bbox() const;

private:
    std::vector<Point2> v_;
    double area_ = 0.0;
    double diameter_ = 0.0;
};

// Signed shoelace area of a closed vertex ring.
double signed_area(const std::vector<Point2>& ring);

Containment polygon_contains(const Polygon& poly, Point2 p, double tol);
// Even-odd test on an arbitrary closed ring (no boundary class).
bool ring_contains(const std::vector<Point2>& ring, Point2 p);

double point_segment_distance(Point2 p, Point2 a, Point2 b);
bool segments_intersect(Point2 a0, Point2 a1, Point2 b0, Point2 b1);
double segment_segment_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1);

double polyline_length(const Polyline& pl);
double point_polyline_distance(Point2 p, const Polyline& pl);
// Minimum distance between the point sets of two polylines.
double polyline_distance(const Polyline& a, const Polyline& b);
// sup over a of dist(., b).
double directed_hausdorff(const Polyline& a, const Polyline& b);
double hausdorff_distance(const Polyline& a, const Polyline& b);

// Uniform bucket grid answering nearest-distance queries against a polyline.
class SegmentIndex {
public:
    explicit SegmentIndex(const Polyline& pl);
    double distance(Point2 p) const;

private:
    Polyline pl_;
    Point2 origin_{};
    double cell_ = 1.0;
    long nx_ = 1, ny_ = 1;
    std::vector<std::vector<std::size_t>> cells_;
    bool brute_ = true;
};

// Position on a polygon boundary as (edge index, parameter along edge).
struct BoundaryPosition {
    std::size_t edge = 0;
    double t = 0.0;
};

BoundaryPosition locate_on_boundary(const Polygon& poly, Point2 p);
double boundary_distance(const Polygon& poly, Point2 p);
// Counterclockwise boundary path from `from` to `to`.
Polyline polygon_arc(const Polygon& poly, BoundaryPosition from, BoundaryPosition to);

}  // namespace orthotile
