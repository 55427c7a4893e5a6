#pragma once

// Continuous-plane primitives: points, circles, segments, circular arcs,
// smallest enclosing circle, tangent-constrained circle construction and
// trajectory intersection tests. All functions here are pure and thread-safe.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace gathersim {

constexpr double kPi = 3.14159265358979323846;

// Base relative tolerance for all coincidence / on-circle tests.
constexpr double kEpsBase = 1e-9;

// eps_geo for a problem of the given length scale (typically the SEC radius).
inline double eps_for(double scale) { return kEpsBase * (1.0 + scale); }

struct Point {
    double x = 0.0;
    double y = 0.0;

    Point operator+(Point o) const { return {x + o.x, y + o.y}; }
    Point operator-(Point o) const { return {x - o.x, y - o.y}; }
    Point operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Point&) const = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline Point perp(Point a) { return {-a.y, a.x}; }

inline Point unit(Point a) {
    double n = norm(a);
    if (n == 0.0) throw std::domain_error("unit: zero vector");
    return {a.x / n, a.y / n};
}

inline bool finite(Point a) { return std::isfinite(a.x) && std::isfinite(a.y); }

// Angle of the vector in (-pi, pi].
inline double angle_of(Point a) { return std::atan2(a.y, a.x); }

// Normalize an angle into [0, 2*pi).
double norm_angle(double a);

// Counterclockwise angular distance from a to b, in [0, 2*pi).
double ccw_delta(double a, double b);

// Absolute circular distance between two angles, in [0, pi].
double circ_dist(double a, double b);

struct Circle {
    Point center;
    double radius = 0.0;

    bool contains(Point p, double eps) const {
        return distance(p, center) <= radius + eps;
    }
};

// Directed line through `through` with unit direction `dir`.
struct Line {
    Point through;
    Point dir;
};

inline double dist_to_line(Point p, const Line& l) {
    return std::abs(cross(l.dir, p - l.through));
}

// Distance from p to the ray from `origin` in direction of angle `theta`.
double dist_to_ray(Point p, Point origin, double theta);

struct Segment {
    Point from;
    Point to;

    double length() const { return distance(from, to); }
};

enum class ArcOrientation { clockwise, counterclockwise };

// Circular arc with positive swept angle strictly below a full turn.
struct ArcPath {
    Circle circle;
    double start_angle = 0.0;
    double end_angle = 0.0;
    ArcOrientation orientation = ArcOrientation::counterclockwise;

    bool ccw() const { return orientation == ArcOrientation::counterclockwise; }
    // Swept angle in (0, 2*pi).
    double sweep() const {
        double d = ccw() ? ccw_delta(start_angle, end_angle)
                         : ccw_delta(end_angle, start_angle);
        return d == 0.0 ? 2.0 * kPi : d;  // guarded at construction
    }
    double length() const { return circle.radius * sweep(); }
    Point start() const;
    Point end() const;
};

using Path = std::variant<Segment, ArcPath>;

double path_length(const Path& p);
Point path_start(const Path& p);
Point path_end(const Path& p);

// Smallest enclosing circle, Welzl-style randomized incremental construction
// with a fixed internal shuffle seed. Throws std::domain_error on empty input.
Circle smallest_enclosing_circle(std::span<const Point> points);

// Indices of the points lying on the boundary of `sec` (within eps), sorted
// by counterclockwise angle about the center.
std::vector<int> boundary_indices(std::span<const Point> points, const Circle& sec,
                                  double eps);

// Same, but returning the points themselves.
std::vector<Point> boundary_points(std::span<const Point> points, const Circle& sec,
                                   double eps);

// Circle through p and p_star such that `tangent` (a line through p_star)
// touches it exactly at p_star. Returns nullopt when p lies on the tangent
// line (degenerate / infinite radius): callers fall back to a straight path.
std::optional<Circle> circle_through_point_with_tangent(Point p, Point p_star,
                                                        const Line& tangent,
                                                        double eps);

// Arc of `circle` from a to b choosing the side whose angular span contains
// the direction of side_hint (as seen from the circle center). Throws
// std::domain_error when a or b is off-circle beyond eps.
ArcPath arc_between(const Circle& circle, Point a, Point b, Point side_hint,
                    double eps);

// Arc from a to b with an explicit orientation.
ArcPath make_arc(const Circle& circle, Point a, Point b, ArcOrientation orientation,
                 double eps);

// Point at arc length `dist` from the start of the path. Throws
// std::domain_error when dist is outside [0, length] beyond a tiny slack.
Point point_along_path(const Path& path, double dist);

// True iff the two trajectories share a point that is not within eps of any
// point in `exclude`.
bool paths_intersect(const Path& a, const Path& b, std::span<const Point> exclude,
                     double eps);

}  // namespace gathersim
