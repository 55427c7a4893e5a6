#pragma once

// Snapshots of robot positions with weak multiplicity detection, the cell
// decomposition of the smallest enclosing circle and the equal-occupancy
// configuration taxonomy used by the asynchronous protocol.

#include <boost/rational.hpp>
#include <string>
#include <vector>

#include "gathersim/geometry.hpp"

namespace gathersim {

using Rational = boost::rational<long long>;

// Multiset of robot positions as seen at one look instant. Coincident
// entries represent a multiplicity point; multiplicity is always derived
// from the positions, never stored.
struct Snapshot {
    std::vector<Point> positions;

    size_t size() const { return positions.size(); }
};

enum class Occupied { single, multiple };

// Weak multiplicity view: one entry per coincidence class. The flag never
// exposes counts beyond "one" vs "more than one".
struct MultiplicityView {
    struct Location {
        Point where;
        Occupied flag;
    };
    std::vector<Location> locations;

    std::vector<Point> multiplicity_points() const {
        std::vector<Point> out;
        for (const auto& l : locations)
            if (l.flag == Occupied::multiple) out.push_back(l.where);
        return out;
    }
};

// Cells of the SEC: one sector per boundary robot, bounded by rays from the
// center to the midpoints of the boundary arcs flanking that robot.
// occupancy[i] counts strictly interior robots in cell i, with robots on a
// shared ray split equally between the incident cells and a robot at the
// center split 1/k between all cells.
struct CellDecomposition {
    Circle sec;
    std::vector<Point> boundary;      // angle-sorted, size k
    std::vector<double> ray_angles;   // ray_angles[i] separates cell i from i+1
    std::vector<Rational> occupancy;  // size k

    size_t k() const { return boundary.size(); }
    bool all_equal() const {
        for (const auto& v : occupancy)
            if (v != occupancy.front()) return false;
        return true;
    }
};

enum class ConfigTag { Mult, Cell, C0, C1k, C12, C12plus1k };

struct ConfigClass {
    ConfigTag tag = ConfigTag::Cell;
    bool symmetric = false;
};

bool is_starred(ConfigTag t);
std::string to_string(ConfigTag t);

MultiplicityView multiplicity_view(const Snapshot& s, double eps);

// Legal configuration: at most one multiplicity point.
bool is_legal(const Snapshot& s, double eps);

// Requires no multiplicity and at least two boundary robots; throws
// std::domain_error otherwise.
CellDecomposition make_cells(const Snapshot& s, double eps);

ConfigClass classify(const Snapshot& s, int n, double eps);

// True iff a nontrivial rotation about the SEC center or a reflection across
// a line through it maps the position multiset to itself (within eps).
bool detect_symmetry(const Snapshot& s, double eps);

// JSON array of [x, y] pairs.
std::string snapshot_to_json(const Snapshot& s);
Snapshot snapshot_from_json(const std::string& text);

}  // namespace gathersim
