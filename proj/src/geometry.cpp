#include "gathersim/geometry.hpp"

#include <algorithm>
#include <random>

namespace gathersim {

double norm_angle(double a) {
    double r = std::fmod(a, 2.0 * kPi);
    if (r < 0.0) r += 2.0 * kPi;
    // fmod of a tiny negative can round up to exactly 2*pi
    if (r >= 2.0 * kPi) r = 0.0;
    return r;
}

double ccw_delta(double a, double b) { return norm_angle(b - a); }

double circ_dist(double a, double b) {
    double d = norm_angle(b - a);
    return std::min(d, 2.0 * kPi - d);
}

double dist_to_ray(Point p, Point origin, double theta) {
    Point d{std::cos(theta), std::sin(theta)};
    Point w = p - origin;
    double t = dot(w, d);
    if (t <= 0.0) return norm(w);
    return std::abs(cross(d, w));
}

Point ArcPath::start() const {
    return {circle.center.x + circle.radius * std::cos(start_angle),
            circle.center.y + circle.radius * std::sin(start_angle)};
}

Point ArcPath::end() const {
    return {circle.center.x + circle.radius * std::cos(end_angle),
            circle.center.y + circle.radius * std::sin(end_angle)};
}

double path_length(const Path& p) {
    return std::visit([](const auto& q) { return q.length(); }, p);
}

Point path_start(const Path& p) {
    if (const auto* s = std::get_if<Segment>(&p)) return s->from;
    return std::get<ArcPath>(p).start();
}

Point path_end(const Path& p) {
    if (const auto* s = std::get_if<Segment>(&p)) return s->to;
    return std::get<ArcPath>(p).end();
}

namespace {

bool in_circle(const Circle& c, Point p, double slack) {
    return distance(p, c.center) <= c.radius + slack;
}

Circle circle_two(Point a, Point b) {
    Point c = (a + b) * 0.5;
    return {c, distance(a, b) * 0.5};
}

// Circumcircle of three points; falls back to the best two-point circle when
// the points are (nearly) collinear.
Circle circle_three(Point a, Point b, Point c) {
    // Translate by `a` to keep the determinant well conditioned.
    Point u = b - a;
    Point v = c - a;
    double d = 2.0 * cross(u, v);
    double scale = std::max({norm(u), norm(v), 1e-300});
    if (std::abs(d) <= 1e-14 * scale * scale) {
        Circle best = circle_two(a, b);
        Circle bc = circle_two(a, c);
        if (bc.radius > best.radius) best = bc;
        Circle cc = circle_two(b, c);
        if (cc.radius > best.radius) best = cc;
        return best;
    }
    double uu = dot(u, u);
    double vv = dot(v, v);
    Point center{a.x + (v.y * uu - u.y * vv) / d, a.y + (u.x * vv - v.x * uu) / d};
    double r = std::max({distance(center, a), distance(center, b), distance(center, c)});
    return {center, r};
}

Circle sec_with_two(std::span<const Point> pts, size_t limit, Point q1, Point q2) {
    Circle c = circle_two(q1, q2);
    double slack = kEpsBase * (1.0 + c.radius);
    for (size_t i = 0; i < limit; ++i) {
        if (!in_circle(c, pts[i], slack)) {
            c = circle_three(q1, q2, pts[i]);
            slack = kEpsBase * (1.0 + c.radius);
        }
    }
    return c;
}

Circle sec_with_one(std::span<const Point> pts, size_t limit, Point q) {
    Circle c{(pts[0] + q) * 0.5, distance(pts[0], q) * 0.5};
    for (size_t i = 1; i < limit; ++i) {
        double slack = kEpsBase * (1.0 + c.radius);
        if (!in_circle(c, pts[i], slack)) c = sec_with_two(pts, i, q, pts[i]);
    }
    return c;
}

}  // namespace

Circle smallest_enclosing_circle(std::span<const Point> points) {
    if (points.empty()) throw std::domain_error("smallest_enclosing_circle: empty input");
    for (Point p : points) {
        if (!finite(p)) throw std::domain_error("smallest_enclosing_circle: non-finite point");
    }
    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(),
              [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    // Fixed seed: deterministic result independent of the caller's ordering.
    std::mt19937_64 rng(0x5ec5eed);
    std::shuffle(pts.begin(), pts.end(), rng);

    Circle c{pts[0], 0.0};
    for (size_t i = 1; i < pts.size(); ++i) {
        double slack = kEpsBase * (1.0 + c.radius);
        if (!in_circle(c, pts[i], slack)) c = sec_with_one(pts, i, pts[i]);
    }
    return c;
}

std::vector<int> boundary_indices(std::span<const Point> points, const Circle& sec,
                                  double eps) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
        if (std::abs(distance(points[i], sec.center) - sec.radius) <= eps)
            idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        double ta = norm_angle(angle_of(points[a] - sec.center));
        double tb = norm_angle(angle_of(points[b] - sec.center));
        if (ta != tb) return ta < tb;
        return a < b;
    });
    return idx;
}

std::vector<Point> boundary_points(std::span<const Point> points, const Circle& sec,
                                   double eps) {
    std::vector<Point> out;
    for (int i : boundary_indices(points, sec, eps)) out.push_back(points[i]);
    return out;
}

std::optional<Circle> circle_through_point_with_tangent(Point p, Point p_star,
                                                        const Line& tangent,
                                                        double eps) {
    Point n = perp(tangent.dir);
    Point w = p - p_star;
    double wn = dot(w, n);
    if (std::abs(wn) <= eps) return std::nullopt;  // p on the tangent line
    double t = dot(w, w) / (2.0 * wn);
    Point center = p_star + n * t;
    return Circle{center, std::abs(t)};
}

ArcPath make_arc(const Circle& circle, Point a, Point b, ArcOrientation orientation,
                 double eps) {
    if (std::abs(distance(a, circle.center) - circle.radius) > eps ||
        std::abs(distance(b, circle.center) - circle.radius) > eps)
        throw std::domain_error("make_arc: endpoint off circle");
    double sa = angle_of(a - circle.center);
    double sb = angle_of(b - circle.center);
    ArcPath arc{circle, sa, sb, orientation};
    double sw = arc.sweep();
    if (!(sw > 0.0) || sw >= 2.0 * kPi)
        throw std::domain_error("make_arc: degenerate sweep");
    return arc;
}

ArcPath arc_between(const Circle& circle, Point a, Point b, Point side_hint,
                    double eps) {
    if (std::abs(distance(a, circle.center) - circle.radius) > eps ||
        std::abs(distance(b, circle.center) - circle.radius) > eps)
        throw std::domain_error("arc_between: endpoint off circle");
    double sa = angle_of(a - circle.center);
    double sb = angle_of(b - circle.center);
    double sh = angle_of(side_hint - circle.center);
    // Take the counterclockwise arc iff the hint direction falls inside it.
    bool hint_in_ccw = ccw_delta(sa, sh) <= ccw_delta(sa, sb);
    return make_arc(circle, a, b,
                    hint_in_ccw ? ArcOrientation::counterclockwise
                                : ArcOrientation::clockwise,
                    eps);
}

Point point_along_path(const Path& path, double dist) {
    double len = path_length(path);
    double slack = 1e-9 * (1.0 + len);
    if (dist < -slack || dist > len + slack)
        throw std::domain_error("point_along_path: distance out of range");
    dist = std::clamp(dist, 0.0, len);
    if (const auto* s = std::get_if<Segment>(&path)) {
        if (len == 0.0) return s->from;
        double t = dist / len;
        return {s->from.x + (s->to.x - s->from.x) * t,
                s->from.y + (s->to.y - s->from.y) * t};
    }
    const auto& a = std::get<ArcPath>(path);
    double dtheta = dist / a.circle.radius;
    double theta = a.ccw() ? a.start_angle + dtheta : a.start_angle - dtheta;
    return {a.circle.center.x + a.circle.radius * std::cos(theta),
            a.circle.center.y + a.circle.radius * std::sin(theta)};
}

namespace {

bool excluded(Point p, std::span<const Point> exclude, double eps) {
    for (Point e : exclude) {
        if (distance(p, e) <= eps) return true;
    }
    return false;
}

// Parameter of the projection of p onto the segment's carrier line.
double seg_param(const Segment& s, Point p) {
    Point d = s.to - s.from;
    double l2 = dot(d, d);
    if (l2 == 0.0) return 0.0;
    return dot(p - s.from, d) / l2;
}

bool on_segment(const Segment& s, Point p, double eps) {
    double len = s.length();
    if (len <= eps) return distance(p, s.from) <= eps;
    double t = seg_param(s, p);
    if (t < -eps / len || t > 1.0 + eps / len) return false;
    Point proj{s.from.x + (s.to.x - s.from.x) * t, s.from.y + (s.to.y - s.from.y) * t};
    return distance(p, proj) <= eps;
}

bool on_arc(const ArcPath& a, Point p, double eps) {
    if (std::abs(distance(p, a.circle.center) - a.circle.radius) > eps) return false;
    double theta = angle_of(p - a.circle.center);
    double off = a.ccw() ? ccw_delta(a.start_angle, theta)
                         : ccw_delta(theta, a.start_angle);
    double tol = a.circle.radius > eps ? eps / a.circle.radius : kPi;
    return off <= a.sweep() + tol || off >= 2.0 * kPi - tol;
}

bool hit(Point p, std::span<const Point> exclude, double eps) {
    return !excluded(p, exclude, eps);
}

bool seg_seg_intersect(const Segment& p, const Segment& q,
                       std::span<const Point> exclude, double eps) {
    if (p.length() <= eps) {
        return on_segment(q, p.from, eps) && hit(p.from, exclude, eps);
    }
    if (q.length() <= eps) {
        return on_segment(p, q.from, eps) && hit(q.from, exclude, eps);
    }
    Point r = p.to - p.from;
    Point s = q.to - q.from;
    double denom = cross(r, s);
    Point w = q.from - p.from;
    if (std::abs(denom) <= eps * std::max(norm(r), norm(s))) {
        // Parallel. Overlap only if collinear.
        if (std::abs(cross(r, w)) > eps * norm(r)) return false;
        double t0 = seg_param(p, q.from);
        double t1 = seg_param(p, q.to);
        double lo = std::max(0.0, std::min(t0, t1));
        double hi = std::min(1.0, std::max(t0, t1));
        if (hi < lo) return false;
        for (double t : {lo, 0.5 * (lo + hi), hi}) {
            Point x{p.from.x + r.x * t, p.from.y + r.y * t};
            if (hit(x, exclude, eps)) return true;
        }
        return false;
    }
    double t = cross(w, s) / denom;
    double u = cross(w, r) / denom;
    double tol_t = eps / norm(r);
    double tol_u = eps / norm(s);
    if (t < -tol_t || t > 1.0 + tol_t || u < -tol_u || u > 1.0 + tol_u) return false;
    Point x{p.from.x + r.x * t, p.from.y + r.y * t};
    return hit(x, exclude, eps);
}

bool seg_arc_intersect(const Segment& s, const ArcPath& a,
                       std::span<const Point> exclude, double eps) {
    if (s.length() <= eps) {
        return on_arc(a, s.from, eps) && hit(s.from, exclude, eps);
    }
    Point d = unit(s.to - s.from);
    Point w = a.circle.center - s.from;
    double proj = dot(w, d);
    Point foot{s.from.x + d.x * proj, s.from.y + d.y * proj};
    double h = distance(foot, a.circle.center);
    double R = a.circle.radius;
    if (h > R + eps) return false;
    double q2 = std::max(R * R - h * h, 0.0);
    double q = std::sqrt(q2);
    // Near tangency the offset q loses roughly R^2*ulp/q of precision; widen
    // the tolerance accordingly so huge flat arcs do not misreport hits.
    double eps_eff = eps + 1e-15 * R * R / std::max(q, 1e-9 * (1.0 + R));
    for (double off : {-q, q}) {
        Point x{foot.x + d.x * off, foot.y + d.y * off};
        if (on_segment(s, x, eps_eff) && on_arc(a, x, eps_eff) &&
            hit(x, exclude, eps_eff))
            return true;
        if (q <= eps_eff) break;  // tangential: single candidate
    }
    return false;
}

bool arc_arc_intersect(const ArcPath& a, const ArcPath& b,
                       std::span<const Point> exclude, double eps) {
    Point c1 = a.circle.center, c2 = b.circle.center;
    double r1 = a.circle.radius, r2 = b.circle.radius;
    double d = distance(c1, c2);
    if (d <= eps && std::abs(r1 - r2) <= eps) {
        // Same supporting circle: compare angular intervals on circle a.
        double tol = r1 > eps ? eps / r1 : kPi;
        double a0 = a.ccw() ? a.start_angle : a.end_angle;
        double asw = a.sweep();
        double b_lo = b.ccw() ? b.start_angle : b.end_angle;
        double bsw = b.sweep();
        // Overlap of [0, asw] with [s, s+bsw] where s = offset of b_lo from a0.
        for (double shift : {0.0, -2.0 * kPi}) {
            double s0 = ccw_delta(a0, b_lo) + shift;
            double lo = std::max(0.0, s0);
            double hi = std::min(asw, s0 + bsw);
            if (hi < lo - tol) continue;
            lo = std::clamp(lo, 0.0, asw);
            hi = std::clamp(hi, 0.0, asw);
            for (double t : {lo, 0.5 * (lo + hi), hi}) {
                double theta = a0 + t;
                Point x{c1.x + r1 * std::cos(theta), c1.y + r1 * std::sin(theta)};
                if (on_arc(b, x, eps) && hit(x, exclude, eps)) return true;
            }
        }
        return false;
    }
    if (d > r1 + r2 + eps) return false;
    if (d < std::abs(r1 - r2) - eps) return false;
    if (d <= eps) return false;  // concentric, different radii
    // Radical-line construction for the (up to two) intersection points.
    double x0 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    double h2 = r1 * r1 - x0 * x0;
    double h = std::sqrt(std::max(h2, 0.0));
    // The squares above cancel catastrophically for huge, nearly tangent
    // circles; widen the tolerance by the propagated error in h.
    double scale2 = d * d + r1 * r1 + r2 * r2;
    double eps_eff = eps + 1e-15 * scale2 / std::max(h, 1e-9 * (1.0 + r1 + r2));
    Point u12 = unit(c2 - c1);
    Point n = perp(u12);
    for (double sgn : {1.0, -1.0}) {
        Point x{c1.x + u12.x * x0 + n.x * h * sgn, c1.y + u12.y * x0 + n.y * h * sgn};
        if (on_arc(a, x, eps_eff) && on_arc(b, x, eps_eff) && hit(x, exclude, eps_eff))
            return true;
        if (h <= eps_eff) break;  // tangent circles: single candidate
    }
    return false;
}

}  // namespace

bool paths_intersect(const Path& a, const Path& b, std::span<const Point> exclude,
                     double eps) {
    if (const auto* sa = std::get_if<Segment>(&a)) {
        if (const auto* sb = std::get_if<Segment>(&b))
            return seg_seg_intersect(*sa, *sb, exclude, eps);
        return seg_arc_intersect(*sa, std::get<ArcPath>(b), exclude, eps);
    }
    const auto& aa = std::get<ArcPath>(a);
    if (const auto* sb = std::get_if<Segment>(&b))
        return seg_arc_intersect(*sb, aa, exclude, eps);
    return arc_arc_intersect(aa, std::get<ArcPath>(b), exclude, eps);
}

}  // namespace gathersim
