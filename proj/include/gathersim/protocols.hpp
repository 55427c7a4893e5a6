#pragma once

// Compute phase of the robots: pure functions from an observed snapshot plus
// the robot's own position to a movement command. Everything here is
// deterministic and insensitive to the storage order of the snapshot.

#include <stdexcept>

#include "gathersim/configuration.hpp"
#include "gathersim/geometry.hpp"

namespace gathersim {

enum class PathStyle { straight, circular };
enum class MoveExtent { full, half };

// Output of one compute phase. `path` starts at the robot's position and
// ends at the destination (full) or at the midpoint of the full path (half).
// A stay command has a degenerate path at the robot's position.
struct MoveCommand {
    Point destination;
    PathStyle style = PathStyle::straight;
    MoveExtent extent = MoveExtent::full;
    Path path = Segment{};
    bool stay = false;
};

MoveCommand stay_command(Point at);

// Tangent line through the common destination, directed into the free region
// the circular path should bend toward.
struct TangentLine {
    Point at;
    Point dir;  // unit
};

// Boundary robots designated to keep the SEC pinned.
struct FixSet {
    std::vector<Point> members;  // angle-sorted about the SEC center

    bool contains(Point p, double eps) const {
        for (Point m : members)
            if (distance(p, m) <= eps) return true;
        return false;
    }
};

struct MultipleMultiplicityError : std::domain_error {
    MultipleMultiplicityError()
        : std::domain_error("protocol undefined: more than one multiplicity point") {}
};

struct InadmissibleConfigurationError : std::domain_error {
    InadmissibleConfigurationError()
        : std::domain_error(
              "inadmissible configuration: symmetric equal-occupancy class, "
              "leader election impossible") {}
};

// True iff the open segment from `self` to `dest` contains no other robot
// within eps (one instance of the robot's own position is discounted).
bool corridor_free(const Snapshot& s, Point self, Point dest, double eps);

// Tangent line for the circular path of the robot at p heading to p_star.
// s_min is the Behavior-1 constant S used by the chain recursion.
TangentLine find_tangent(const Snapshot& s, Point p, Point p_star, double eps,
                         double s_min);

// Movement command for the semi-synchronous protocol: head to the
// multiplicity point if one exists, else to the SEC center; straight when the
// corridor is free, else along the tangent-constrained circular arc.
MoveCommand gather_k(const Snapshot& s, Point self_pos, double eps, double s_min);

// Subset of boundary robots whose SEC equals the SEC of the whole snapshot.
// f must be a nonempty subset of the boundary. Throws std::domain_error when
// a required flanking robot does not exist.
FixSet fix_sec(const std::vector<Point>& f, const Snapshot& s, double eps);

// Deterministic leader among the boundary robots of an asymmetric snapshot;
// invariant under similarity transforms, equivariant under reflection.
// Throws std::domain_error on symmetric input.
Point elect_leader(const Snapshot& s, double eps);

// Movement command for the ASYNC_IC protocol (fixes part of the boundary so
// the SEC stays invariant until a multiplicity forms).
MoveCommand async_gather(const Snapshot& s, Point self_pos, int n, double eps,
                         double s_min);

// Fixed robots chosen by async_gather for the given snapshot (empty when a
// multiplicity point exists).
FixSet async_fixed_set(const Snapshot& s, int n, double eps);

// Wait-free demo protocol for non-legal configurations: move to the nearest
// other occupied location. Used by the scripted impossibility scenario.
MoveCommand mirror_demo(const Snapshot& s, Point self_pos, double eps);

}  // namespace gathersim
