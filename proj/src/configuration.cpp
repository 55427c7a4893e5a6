#include "gathersim/configuration.hpp"

#include <algorithm>

#include "json.hpp"

namespace gathersim {

bool is_starred(ConfigTag t) {
    return t == ConfigTag::C0 || t == ConfigTag::C1k || t == ConfigTag::C12 ||
           t == ConfigTag::C12plus1k;
}

std::string to_string(ConfigTag t) {
    switch (t) {
        case ConfigTag::Mult: return "Mult";
        case ConfigTag::Cell: return "Cell";
        case ConfigTag::C0: return "C0";
        case ConfigTag::C1k: return "C1k";
        case ConfigTag::C12: return "C12";
        case ConfigTag::C12plus1k: return "C12plus1k";
    }
    return "?";
}

MultiplicityView multiplicity_view(const Snapshot& s, double eps) {
    MultiplicityView view;
    std::vector<int> count;
    for (Point p : s.positions) {
        bool placed = false;
        for (size_t c = 0; c < view.locations.size(); ++c) {
            if (distance(p, view.locations[c].where) <= eps) {
                ++count[c];
                placed = true;
                break;
            }
        }
        if (!placed) {
            view.locations.push_back({p, Occupied::single});
            count.push_back(1);
        }
    }
    for (size_t c = 0; c < view.locations.size(); ++c) {
        if (count[c] >= 2) view.locations[c].flag = Occupied::multiple;
    }
    return view;
}

bool is_legal(const Snapshot& s, double eps) {
    return multiplicity_view(s, eps).multiplicity_points().size() <= 1;
}

CellDecomposition make_cells(const Snapshot& s, double eps) {
    if (!multiplicity_view(s, eps).multiplicity_points().empty())
        throw std::domain_error("make_cells: snapshot has a multiplicity point");
    Circle sec = smallest_enclosing_circle(s.positions);
    std::vector<int> bidx = boundary_indices(s.positions, sec, eps);
    size_t k = bidx.size();
    if (k < 2) throw std::domain_error("make_cells: fewer than 2 boundary robots");

    CellDecomposition cells;
    cells.sec = sec;
    std::vector<double> theta(k);
    for (size_t i = 0; i < k; ++i) {
        cells.boundary.push_back(s.positions[bidx[i]]);
        theta[i] = norm_angle(angle_of(s.positions[bidx[i]] - sec.center));
    }
    cells.ray_angles.resize(k);
    for (size_t i = 0; i < k; ++i) {
        double gap = ccw_delta(theta[i], theta[(i + 1) % k]);
        if (gap == 0.0 && k > 1) gap = 2.0 * kPi;  // k == 1 impossible here
        cells.ray_angles[i] = norm_angle(theta[i] + 0.5 * gap);
    }
    cells.occupancy.assign(k, Rational(0));

    std::vector<bool> is_boundary(s.positions.size(), false);
    for (int i : bidx) is_boundary[i] = true;

    for (size_t r = 0; r < s.positions.size(); ++r) {
        if (is_boundary[r]) continue;
        Point p = s.positions[r];
        if (distance(p, sec.center) <= eps) {
            // Center robot is incident to every cell.
            for (auto& v : cells.occupancy) v += Rational(1, static_cast<long long>(k));
            continue;
        }
        std::vector<size_t> on_rays;
        for (size_t i = 0; i < k; ++i) {
            if (dist_to_ray(p, sec.center, cells.ray_angles[i]) <= eps)
                on_rays.push_back(i);
        }
        if (!on_rays.empty()) {
            // Ray i is shared by cells i and i+1.
            Rational share(1, static_cast<long long>(2 * on_rays.size()));
            for (size_t i : on_rays) {
                cells.occupancy[i] += share;
                cells.occupancy[(i + 1) % k] += share;
            }
            continue;
        }
        double phi = norm_angle(angle_of(p - sec.center));
        for (size_t i = 0; i < k; ++i) {
            double lo = cells.ray_angles[(i + k - 1) % k];
            double span = ccw_delta(lo, cells.ray_angles[i]);
            if (span == 0.0) span = 2.0 * kPi;
            if (ccw_delta(lo, phi) <= span) {
                cells.occupancy[i] += Rational(1);
                break;
            }
        }
    }
    return cells;
}

ConfigClass classify(const Snapshot& s, int n, double eps) {
    ConfigClass c;
    c.symmetric = detect_symmetry(s, eps);
    if (!multiplicity_view(s, eps).multiplicity_points().empty()) {
        c.tag = ConfigTag::Mult;
        return c;
    }
    if (s.size() < 2) {
        c.tag = ConfigTag::Cell;
        return c;
    }
    CellDecomposition cells = make_cells(s, eps);
    long long k = static_cast<long long>(cells.k());
    if (2 * k > n && cells.all_equal()) {
        Rational v = cells.occupancy.front();
        if (v == Rational(0))
            c.tag = ConfigTag::C0;
        else if (v == Rational(1, k))
            c.tag = ConfigTag::C1k;
        else if (v == Rational(1, 2))
            c.tag = ConfigTag::C12;
        else if (v == Rational(1, 2) + Rational(1, k))
            c.tag = ConfigTag::C12plus1k;
        else
            c.tag = ConfigTag::Cell;  // unreachable for k > n/2
        return c;
    }
    c.tag = ConfigTag::Cell;
    return c;
}

namespace {

struct Polar {
    double theta;
    double rho;
};

// Greedy matching of two polar multisets under an angular/radial tolerance.
bool polar_multisets_equal(std::vector<Polar> a, std::vector<Polar> b,
                           double ang_tol, double rad_tol) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const Polar& pa : a) {
        bool found = false;
        for (size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            if (circ_dist(pa.theta, b[j].theta) <= ang_tol &&
                std::abs(pa.rho - b[j].rho) <= rad_tol) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace

bool detect_symmetry(const Snapshot& s, double eps) {
    Circle sec = smallest_enclosing_circle(s.positions);
    std::vector<Polar> pts;
    for (Point p : s.positions) {
        double rho = distance(p, sec.center);
        if (rho <= eps) continue;  // center robots are fixed by every candidate map
        pts.push_back({norm_angle(angle_of(p - sec.center)), rho});
    }
    if (pts.empty()) return true;  // everything at the center
    // Angular tolerance matched to the linear eps at the smallest radius in play.
    double min_rho = pts.front().rho;
    for (const Polar& p : pts) min_rho = std::min(min_rho, p.rho);
    double ang_tol = std::min(eps / min_rho * 4.0, 1e-6);
    double rad_tol = eps * 4.0;

    // Rotations: candidate angles map robot 0 onto a same-radius robot.
    for (size_t j = 1; j < pts.size(); ++j) {
        if (std::abs(pts[j].rho - pts[0].rho) > rad_tol) continue;
        double alpha = norm_angle(pts[j].theta - pts[0].theta);
        if (alpha <= ang_tol || 2.0 * kPi - alpha <= ang_tol) continue;
        std::vector<Polar> rotated = pts;
        for (Polar& p : rotated) p.theta = norm_angle(p.theta + alpha);
        if (polar_multisets_equal(rotated, pts, ang_tol, rad_tol)) return true;
    }
    // Reflections: candidate axes map robot 0 onto some robot (possibly itself).
    for (size_t j = 0; j < pts.size(); ++j) {
        if (std::abs(pts[j].rho - pts[0].rho) > rad_tol) continue;
        double beta = 0.5 * (pts[0].theta + pts[j].theta);
        std::vector<Polar> reflected = pts;
        for (Polar& p : reflected) p.theta = norm_angle(2.0 * beta - p.theta);
        if (polar_multisets_equal(reflected, pts, ang_tol, rad_tol)) return true;
    }
    return false;
}

std::string snapshot_to_json(const Snapshot& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (Point p : s.positions) arr.push_back({p.x, p.y});
    return arr.dump();
}

Snapshot snapshot_from_json(const std::string& text) {
    nlohmann::json arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw std::runtime_error("snapshot: expected a JSON array");
    Snapshot s;
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw std::runtime_error("snapshot: expected [x, y] pairs");
        Point p{e[0].get<double>(), e[1].get<double>()};
        if (!finite(p)) throw std::runtime_error("snapshot: non-finite coordinate");
        s.positions.push_back(p);
    }
    return s;
}

}  // namespace gathersim
