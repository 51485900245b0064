#pragma once

#include <complex>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace nifs {

using Point = std::complex<double>;

struct ClosedDisk {
    Point center{};
    double radius = 0.0;

    double diameter() const { return 2.0 * radius; }
    bool operator==(const ClosedDisk&) const = default;
};

// A closed segment of the real axis.
struct RealInterval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool operator==(const RealInterval&) const = default;
};

// Ann(center; inner, outer) = { z : inner < |z - center| < outer }.
struct RoundAnnulus {
    Point center{};
    double inner = 0.0;
    double outer = 0.0;

    bool operator==(const RoundAnnulus&) const = default;
};

// Open disk used as the analytic domain U.
struct DiskDomain {
    ClosedDisk disk;
};

using Enclosure = std::variant<ClosedDisk, RealInterval>;

ClosedDisk make_disk(Point center, double radius);
RealInterval make_interval(double lo, double hi);
RoundAnnulus make_annulus(Point center, double inner, double outer);
DiskDomain make_domain(Point center, double radius);

double diameter(const Enclosure& e);
Point center_of(const Enclosure& e);

// Largest and smallest distance from w to a point of the enclosure.
double max_distance(const Enclosure& e, Point w);
double min_distance(const Enclosure& e, Point w);

/// log(R/r). Throws ErrorKind::degenerate_annulus when r == 0.
double annulus_modulus(const RoundAnnulus& a);

/// Lower bound on the Euclidean distance between any two sets held by the
/// enclosures. Exact for intervals and for a disk against an interval.
double set_distance_lower(const Enclosure& a, const Enclosure& b);

/// Lower bound on dist(E, boundary of X). Requires E inside X, checked
/// conservatively; throws ErrorKind::containment otherwise.
double boundary_distance_lower(const Enclosure& e, const ClosedDisk& x);
double boundary_distance_lower(const Enclosure& e, const RealInterval& x);
double boundary_distance_lower(const Enclosure& e, const Enclosure& x);

bool contains(const ClosedDisk& outer, const ClosedDisk& inner);
bool contains(const Enclosure& outer, const Enclosure& inner);

enum class Side { hole, outside, crossing };

// Where an enclosure sits relative to the closed complementary components
// of a round annulus. `crossing` means it may meet the open annulus.
Side classify(const RoundAnnulus& a, const Enclosure& e);

/// True only if every piece lies in the closed hole or the closed outside
/// and both components are occupied. False negatives are possible when
/// enclosures are loose; false positives are not.
bool annulus_separates(const RoundAnnulus& a, std::span<const Enclosure> pieces);

/// Poincare distance (density 2/(1-|z|^2) after mapping U to the unit disk).
/// Throws ErrorKind::domain for points not strictly inside U.
double hyperbolic_distance(const DiskDomain& u, Point z, Point w);

/// Brute force over round annuli centred on the grid with radii from the
/// grid: the separating annulus of largest modulus with hole_point in its
/// closed hole, if any exists.
std::optional<RoundAnnulus> best_separating_annulus_search(std::span<const Point> points,
                                                           Point hole_point,
                                                           std::span<const Point> center_grid,
                                                           std::span<const double> radius_grid);

} // namespace nifs
