#include "gathersim/protocols.hpp"

#include <algorithm>
#include <cassert>

namespace gathersim {

MoveCommand stay_command(Point at) {
    MoveCommand cmd;
    cmd.destination = at;
    cmd.style = PathStyle::straight;
    cmd.extent = MoveExtent::full;
    cmd.path = Segment{at, at};
    cmd.stay = true;
    return cmd;
}

namespace {

double dist_to_segment(Point p, Point a, Point b) {
    Point d = b - a;
    double l2 = dot(d, d);
    if (l2 == 0.0) return distance(p, a);
    double t = std::clamp(dot(p - a, d) / l2, 0.0, 1.0);
    return distance(p, Point{a.x + d.x * t, a.y + d.y * t});
}

// Arc of G from `from` to `to` arriving at `to` against the tangent
// direction u, i.e. the arc bending into the free region u points at.
ArcPath arc_for(const Circle& g, Point from, Point to, Point u, double eps) {
    double phi_to = angle_of(to - g.center);
    Point t_ccw{-std::sin(phi_to), std::cos(phi_to)};
    ArcOrientation orient = dot(t_ccw, u) > 0.0 ? ArcOrientation::clockwise
                                                : ArcOrientation::counterclockwise;
    double tol = eps + 1e-12 * (1.0 + g.radius);
    return make_arc(g, from, to, orient, tol);
}

MoveCommand first_half(MoveCommand cmd) {
    if (const auto* seg = std::get_if<Segment>(&cmd.path)) {
        cmd.path = Segment{seg->from, point_along_path(cmd.path, seg->length() * 0.5)};
        return cmd;
    }
    ArcPath arc = std::get<ArcPath>(cmd.path);
    double half_sweep = arc.sweep() * 0.5;
    arc.end_angle = arc.ccw() ? arc.start_angle + half_sweep
                              : arc.start_angle - half_sweep;
    cmd.path = arc;
    return cmd;
}

MoveCommand move_command(const Snapshot& s, Point self, Point dest, PathStyle style,
                         MoveExtent extent, double eps, double s_min) {
    if (distance(self, dest) <= eps) return stay_command(self);
    MoveCommand cmd;
    cmd.destination = dest;
    cmd.style = style;
    cmd.extent = extent;
    if (style == PathStyle::circular) {
        TangentLine tl = find_tangent(s, self, dest, eps, s_min);
        auto g = circle_through_point_with_tangent(self, dest, {tl.at, tl.dir}, eps);
        if (g) {
            cmd.path = arc_for(*g, self, dest, tl.dir, eps);
        } else {
            // Degenerate tangent circle: fall back to the straight path.
            cmd.style = PathStyle::straight;
            cmd.path = Segment{self, dest};
        }
    } else {
        cmd.path = Segment{self, dest};
    }
    if (extent == MoveExtent::half) cmd = first_half(cmd);
    return cmd;
}

}  // namespace

bool corridor_free(const Snapshot& s, Point self, Point dest, double eps) {
    bool self_discounted = false;
    for (Point q : s.positions) {
        if (!self_discounted && distance(q, self) <= eps) {
            self_discounted = true;
            continue;
        }
        // Open segment: robots at either endpoint do not block.
        if (distance(q, self) <= eps || distance(q, dest) <= eps) continue;
        if (dist_to_segment(q, self, dest) <= eps) return false;
    }
    return true;
}

TangentLine find_tangent(const Snapshot& s, Point p, Point p_star, double eps,
                         double s_min) {
    Point w = p - p_star;
    double dp = norm(w);
    Point up = unit(w);
    double theta_p = angle_of(w);

    // Nearest robot on the ray from p_star through p, strictly beyond p.
    bool have_next = false;
    Point next{};
    double best_t = 0.0;
    for (Point q : s.positions) {
        double rho = distance(q, p_star);
        if (rho <= eps) continue;
        if (dist_to_ray(q, p_star, theta_p) > eps) continue;
        double t = dot(q - p_star, up);
        if (t <= dp + eps) continue;
        if (!have_next || t < best_t) {
            have_next = true;
            next = q;
            best_t = t;
        }
    }

    if (have_next) {
        TangentLine inner = find_tangent(s, next, p_star, eps, s_min);
        auto g = circle_through_point_with_tangent(next, p_star, {inner.at, inner.dir},
                                                   eps);
        if (!g) return inner;
        ArcPath arc = arc_for(*g, next, p_star, inner.dir, eps);
        if (arc.length() < s_min) return inner;
        Point after = point_along_path(Path{arc}, s_min);
        if (distance(after, p_star) <= eps) return inner;
        return {p_star, unit(after - p_star)};
    }

    // Base case: bisector of the smallest robot-free angular sector adjacent
    // to p's ray.
    double ccw_gap = 2.0 * kPi, cw_gap = 2.0 * kPi;
    bool any_other_ray = false;
    for (Point q : s.positions) {
        double rho = distance(q, p_star);
        if (rho <= eps) continue;
        if (dist_to_ray(q, p_star, theta_p) <= eps) continue;  // same ray as p
        any_other_ray = true;
        double tq = angle_of(q - p_star);
        ccw_gap = std::min(ccw_gap, ccw_delta(theta_p, tq));
        cw_gap = std::min(cw_gap, ccw_delta(tq, theta_p));
    }
    double bis;
    if (!any_other_ray) {
        // Every robot shares p's ray: any perpendicular direction is free.
        double c1 = norm_angle(theta_p + 0.5 * kPi);
        double c2 = norm_angle(theta_p - 0.5 * kPi);
        bis = std::min(c1, c2);
    } else if (std::abs(ccw_gap - cw_gap) <= 1e-12) {
        double c1 = norm_angle(theta_p + 0.5 * ccw_gap);
        double c2 = norm_angle(theta_p - 0.5 * cw_gap);
        bis = std::min(c1, c2);
    } else if (ccw_gap < cw_gap) {
        bis = norm_angle(theta_p + 0.5 * ccw_gap);
    } else {
        bis = norm_angle(theta_p - 0.5 * cw_gap);
    }
    return {p_star, Point{std::cos(bis), std::sin(bis)}};
}

MoveCommand gather_k(const Snapshot& s, Point self_pos, double eps, double s_min) {
    auto mults = multiplicity_view(s, eps).multiplicity_points();
    if (mults.size() > 1) throw MultipleMultiplicityError();
    Point dest = mults.size() == 1 ? mults.front()
                                   : smallest_enclosing_circle(s.positions).center;
    if (distance(self_pos, dest) <= eps) return stay_command(self_pos);
    PathStyle style = corridor_free(s, self_pos, dest, eps) ? PathStyle::straight
                                                            : PathStyle::circular;
    return move_command(s, self_pos, dest, style, MoveExtent::full, eps, s_min);
}

namespace {

std::vector<Point> sort_by_angle(std::vector<Point> pts, Point center) {
    std::sort(pts.begin(), pts.end(), [&](Point a, Point b) {
        double ta = norm_angle(angle_of(a - center));
        double tb = norm_angle(angle_of(b - center));
        if (ta != tb) return ta < tb;
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
    return pts;
}

// True iff the points fit on a closed semicircle of the given circle.
bool on_semicircle(const std::vector<Point>& pts, Point center) {
    if (pts.size() <= 2) return true;
    std::vector<double> ang;
    for (Point p : pts) ang.push_back(norm_angle(angle_of(p - center)));
    std::sort(ang.begin(), ang.end());
    double max_gap = ang.front() + 2.0 * kPi - ang.back();
    for (size_t i = 1; i < ang.size(); ++i)
        max_gap = std::max(max_gap, ang[i] - ang[i - 1]);
    return max_gap >= kPi - 1e-12;
}

// Boundary robot nearest in angle to `target` strictly on the given side of
// the diameter line with direction `axis` through the center.
std::optional<Point> nearest_flank(const std::vector<Point>& boundary, Point center,
                                   Point axis, double target_angle, int side,
                                   double eps) {
    std::optional<Point> best;
    double best_d = 0.0;
    for (Point q : boundary) {
        double c = cross(axis, q - center);
        if (side > 0 ? c <= eps : c >= -eps) continue;
        double d = circ_dist(norm_angle(angle_of(q - center)), target_angle);
        if (!best || d < best_d) {
            best = q;
            best_d = d;
        }
    }
    return best;
}

}  // namespace

FixSet fix_sec(const std::vector<Point>& f, const Snapshot& s, double eps) {
    if (f.empty()) throw std::domain_error("fix_sec: empty input set");
    Circle sec = smallest_enclosing_circle(s.positions);
    Point o = sec.center;
    for (Point p : f) {
        if (std::abs(distance(p, o) - sec.radius) > 4.0 * eps)
            throw std::domain_error("fix_sec: member not on the SEC boundary");
    }
    std::vector<Point> boundary = boundary_points(s.positions, sec, eps);

    auto finish = [&](std::vector<Point> members) {
        std::sort(members.begin(), members.end(), [](Point a, Point b) {
            return a.x < b.x || (a.x == b.x && a.y < b.y);
        });
        members.erase(std::unique(members.begin(), members.end(),
                                  [eps](Point a, Point b) {
                                      return distance(a, b) <= eps;
                                  }),
                      members.end());
        return FixSet{sort_by_angle(std::move(members), o)};
    };

    if (!on_semicircle(f, o)) {
        if (f.size() <= 4) return finish(f);
        // Reduce an oversized set: a diametric pair or any triple that does
        // not fit on a semicircle pins the SEC on its own.
        for (size_t i = 0; i < f.size(); ++i)
            for (size_t j = i + 1; j < f.size(); ++j)
                if (distance(f[i], f[j]) >= 2.0 * sec.radius - 4.0 * eps)
                    return finish({f[i], f[j]});
        for (size_t i = 0; i < f.size(); ++i)
            for (size_t j = i + 1; j < f.size(); ++j)
                for (size_t l = j + 1; l < f.size(); ++l)
                    if (!on_semicircle({f[i], f[j], f[l]}, o))
                        return finish({f[i], f[j], f[l]});
        return finish(f);  // unreachable when the input is not on a semicircle
    }

    if (f.size() == 1) {
        Point ri = f.front();
        Point x{2.0 * o.x - ri.x, 2.0 * o.y - ri.y};  // diametric point
        for (Point q : boundary) {
            if (distance(q, x) <= 4.0 * eps) return finish({ri, q});
        }
        Point axis = unit(ri - o);
        double tx = norm_angle(angle_of(x - o));
        auto rj = nearest_flank(boundary, o, axis, tx, +1, eps);
        auto rk = nearest_flank(boundary, o, axis, tx, -1, eps);
        if (!rj || !rk)
            throw std::domain_error("fix_sec: flanking boundary robots absent");
        return finish({ri, *rj, *rk});
    }

    // |F| >= 2 on a semicircle: farthest pair plus the flanks of the point
    // diametrically opposite their chord midpoint.
    Point a = f[0], b = f[1];
    double best = distance(a, b);
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = i + 1; j < f.size(); ++j)
            if (double d = distance(f[i], f[j]); d > best) {
                best = d;
                a = f[i];
                b = f[j];
            }
    if (best >= 2.0 * sec.radius - 4.0 * eps) {
        // The farthest pair is a diameter; it pins the SEC by itself.
        if (f.size() <= 4) return finish(f);
        return finish({a, b});
    }
    Point mid = (a + b) * 0.5;
    Point dir = unit(o - mid);
    Point x = o + dir * sec.radius;
    double tx = norm_angle(angle_of(x - o));
    for (Point q : boundary) {
        if (distance(q, x) <= 4.0 * eps) return finish({a, b, q});
    }
    auto rp = nearest_flank(boundary, o, dir, tx, +1, eps);
    auto rq = nearest_flank(boundary, o, dir, tx, -1, eps);
    if (!rp || !rq) throw std::domain_error("fix_sec: flanking boundary robots absent");
    return finish({a, b, *rp, *rq});
}

namespace {

struct InteriorPolar {
    double theta;
    double rho;
};

// Angular signature of the configuration as seen from boundary robot `start`
// walking in direction `dir` (+1 ccw, -1 cw): the k consecutive boundary
// gaps followed by the sorted interior (offset, radius/r) pairs.
std::vector<double> signature_for(const std::vector<double>& btheta,
                                  const std::vector<InteriorPolar>& interior,
                                  double radius, size_t start, int dir) {
    long long k = static_cast<long long>(btheta.size());
    std::vector<double> seq;
    seq.reserve(k + 2 * interior.size());
    for (long long t = 0; t < k; ++t) {
        size_t from = ((static_cast<long long>(start) + dir * t) % k + k) % k;
        size_t to = ((static_cast<long long>(start) + dir * (t + 1)) % k + k) % k;
        seq.push_back(dir > 0 ? ccw_delta(btheta[from], btheta[to])
                              : ccw_delta(btheta[to], btheta[from]));
    }
    std::vector<std::pair<double, double>> pairs;
    for (const InteriorPolar& ip : interior) {
        if (ip.rho == 0.0) {
            pairs.emplace_back(0.0, 0.0);
            continue;
        }
        double off = dir > 0 ? ccw_delta(btheta[start], ip.theta)
                             : ccw_delta(ip.theta, btheta[start]);
        pairs.emplace_back(off, ip.rho / radius);
    }
    std::sort(pairs.begin(), pairs.end());
    for (auto [off, rho] : pairs) {
        seq.push_back(off);
        seq.push_back(rho);
    }
    return seq;
}

int lex_compare(const std::vector<double>& a, const std::vector<double>& b,
                double tol) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        if (a[i] < b[i] - tol) return -1;
        if (a[i] > b[i] + tol) return 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

}  // namespace

Point elect_leader(const Snapshot& s, double eps) {
    if (detect_symmetry(s, eps))
        throw std::domain_error("elect_leader: symmetric configuration");
    Circle sec = smallest_enclosing_circle(s.positions);
    std::vector<int> bidx = boundary_indices(s.positions, sec, eps);
    if (bidx.empty()) throw std::domain_error("elect_leader: no boundary robots");

    std::vector<double> btheta;
    for (int i : bidx)
        btheta.push_back(norm_angle(angle_of(s.positions[i] - sec.center)));
    std::vector<bool> is_boundary(s.positions.size(), false);
    for (int i : bidx) is_boundary[i] = true;
    std::vector<InteriorPolar> interior;
    for (size_t i = 0; i < s.positions.size(); ++i) {
        if (is_boundary[i]) continue;
        double rho = distance(s.positions[i], sec.center);
        if (rho <= eps) {
            interior.push_back({0.0, 0.0});
        } else {
            interior.push_back(
                {norm_angle(angle_of(s.positions[i] - sec.center)), rho});
        }
    }

    const double tol = 1e-9;
    size_t best_i = 0;
    std::vector<double> best_key;
    for (size_t i = 0; i < btheta.size(); ++i) {
        for (int dir : {+1, -1}) {
            std::vector<double> key = signature_for(btheta, interior, sec.radius, i, dir);
            if (best_key.empty() || lex_compare(key, best_key, tol) < 0) {
                best_key = std::move(key);
                best_i = i;
            }
        }
    }
    return s.positions[bidx[best_i]];
}

namespace {

FixSet compute_async_fixed(const Snapshot& s, int n, double eps,
                           const Circle& sec, const std::vector<int>& bidx) {
    long long k = static_cast<long long>(bidx.size());
    std::vector<Point> bpts;
    for (int i : bidx) bpts.push_back(s.positions[i]);
    if (2 * k <= n) return FixSet{sort_by_angle(bpts, sec.center)};

    CellDecomposition cells = make_cells(s, eps);
    if (cells.all_equal()) {
        if (detect_symmetry(s, eps)) throw InadmissibleConfigurationError();
        Point leader = elect_leader(s, eps);
        return fix_sec({leader}, s, eps);
    }
    Rational vmax = cells.occupancy.front();
    for (const auto& v : cells.occupancy) vmax = std::max(vmax, v);
    std::vector<Point> f, complement;
    for (size_t i = 0; i < cells.k(); ++i) {
        if (cells.occupancy[i] == vmax)
            f.push_back(cells.boundary[i]);
        else
            complement.push_back(cells.boundary[i]);
    }
    if (2 * static_cast<long long>(f.size()) <= k) return fix_sec(f, s, eps);
    return fix_sec(complement, s, eps);
}

// Is `self` within eps of the bisector ray of the angular gap between its
// two neighbouring boundary robots?
bool on_neighbour_bisector(Point self, const std::vector<Point>& boundary,
                           Point center, double eps) {
    double phi = norm_angle(angle_of(self - center));
    bool self_discounted = false;
    double next_gap = 2.0 * kPi, prev_gap = 2.0 * kPi;
    double next_theta = 0.0, prev_theta = 0.0;
    bool have = false;
    for (Point q : boundary) {
        if (!self_discounted && distance(q, self) <= eps) {
            self_discounted = true;
            continue;
        }
        double tq = norm_angle(angle_of(q - center));
        double fwd = ccw_delta(phi, tq);
        double bwd = ccw_delta(tq, phi);
        if (fwd == 0.0 || bwd == 0.0) return false;  // self on a neighbour's ray
        have = true;
        if (fwd < next_gap) {
            next_gap = fwd;
            next_theta = tq;
        }
        if (bwd < prev_gap) {
            prev_gap = bwd;
            prev_theta = tq;
        }
    }
    if (!have || next_gap + prev_gap >= 2.0 * kPi) return false;
    double bis = norm_angle(prev_theta + 0.5 * ccw_delta(prev_theta, next_theta));
    return dist_to_ray(self, center, bis) <= eps;
}

// Would a full move of `self` to the center leave all cells equally occupied
// without creating a multiplicity point?
bool half_move_lookahead(const Snapshot& s, Point self, Point center, double eps) {
    Snapshot moved = s;
    bool replaced = false;
    for (Point& p : moved.positions) {
        if (!replaced && distance(p, self) <= eps) {
            p = center;
            replaced = true;
        }
    }
    if (!replaced) return false;
    if (!multiplicity_view(moved, eps).multiplicity_points().empty()) return false;
    try {
        return make_cells(moved, eps).all_equal();
    } catch (const std::domain_error&) {
        return false;
    }
}

}  // namespace

FixSet async_fixed_set(const Snapshot& s, int n, double eps) {
    if (!multiplicity_view(s, eps).multiplicity_points().empty()) return FixSet{};
    Circle sec = smallest_enclosing_circle(s.positions);
    std::vector<int> bidx = boundary_indices(s.positions, sec, eps);
    return compute_async_fixed(s, n, eps, sec, bidx);
}

MoveCommand async_gather(const Snapshot& s, Point self_pos, int n, double eps,
                         double s_min) {
    auto mults = multiplicity_view(s, eps).multiplicity_points();
    if (mults.size() > 1) throw MultipleMultiplicityError();
    if (mults.size() == 1) {
        Point dest = mults.front();
        if (distance(self_pos, dest) <= eps) return stay_command(self_pos);
        PathStyle style = corridor_free(s, self_pos, dest, eps) ? PathStyle::straight
                                                                : PathStyle::circular;
        return move_command(s, self_pos, dest, style, MoveExtent::full, eps, s_min);
    }

    Circle sec = smallest_enclosing_circle(s.positions);
    Point o = sec.center;
    std::vector<int> bidx = boundary_indices(s.positions, sec, eps);
    long long k = static_cast<long long>(bidx.size());
    FixSet fixed = compute_async_fixed(s, n, eps, sec, bidx);
    if (fixed.contains(self_pos, eps)) return stay_command(self_pos);
    if (distance(self_pos, o) <= eps) return stay_command(self_pos);

    if (2 * k <= n)
        return move_command(s, self_pos, o, PathStyle::straight, MoveExtent::full, eps,
                            s_min);

    std::vector<Point> boundary;
    for (int i : bidx) boundary.push_back(s.positions[i]);
    PathStyle style = PathStyle::straight;
    if (on_neighbour_bisector(self_pos, boundary, o, eps) ||
        !corridor_free(s, self_pos, o, eps))
        style = PathStyle::circular;
    MoveExtent extent = half_move_lookahead(s, self_pos, o, eps) ? MoveExtent::half
                                                                 : MoveExtent::full;
    return move_command(s, self_pos, o, style, extent, eps, s_min);
}

MoveCommand mirror_demo(const Snapshot& s, Point self_pos, double eps) {
    auto view = multiplicity_view(s, eps);
    std::optional<Point> best;
    for (const auto& loc : view.locations) {
        if (distance(loc.where, self_pos) <= eps) continue;
        if (!best || distance(loc.where, self_pos) < distance(*best, self_pos) ||
            (distance(loc.where, self_pos) == distance(*best, self_pos) &&
             (loc.where.x < best->x || (loc.where.x == best->x && loc.where.y < best->y))))
            best = loc.where;
    }
    if (!best) return stay_command(self_pos);
    MoveCommand cmd;
    cmd.destination = *best;
    cmd.style = PathStyle::straight;
    cmd.extent = MoveExtent::full;
    cmd.path = Segment{self_pos, *best};
    return cmd;
}

}  // namespace gathersim
