#include "nifs/geometry.hpp"

#include "nifs/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nifs {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::degenerate_annulus: return "degenerate-annulus";
    case ErrorKind::containment: return "containment";
    case ErrorKind::domain: return "domain";
    case ErrorKind::branch: return "branch";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::mode: return "mode";
    case ErrorKind::horizon: return "horizon";
    case ErrorKind::size: return "size";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::hypothesis: return "hypothesis";
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::arithmetic: return "arithmetic";
    case ErrorKind::config: return "config";
    }
    return "unknown";
}

namespace {

bool finite(Point z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace

ClosedDisk make_disk(Point center, double radius)
{
    if (!finite(center) || !std::isfinite(radius) || radius < 0.0)
        throw Error(ErrorKind::parameter, "disk needs a finite center and a finite radius >= 0");
    return {center, radius};
}

RealInterval make_interval(double lo, double hi)
{
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
        throw Error(ErrorKind::parameter, "interval needs finite lo <= hi");
    return {lo, hi};
}

RoundAnnulus make_annulus(Point center, double inner, double outer)
{
    if (!finite(center) || !std::isfinite(outer) || !(inner >= 0.0) || !(inner < outer))
        throw Error(ErrorKind::parameter, "annulus needs 0 <= r < R < infinity");
    return {center, inner, outer};
}

DiskDomain make_domain(Point center, double radius)
{
    if (!(radius > 0.0))
        throw Error(ErrorKind::parameter, "domain disk needs a positive radius");
    return {make_disk(center, radius)};
}

double diameter(const Enclosure& e)
{
    return std::visit([](const auto& x) {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ClosedDisk>)
            return x.diameter();
        else
            return x.length();
    }, e);
}

Point center_of(const Enclosure& e)
{
    if (const auto* d = std::get_if<ClosedDisk>(&e))
        return d->center;
    const auto& i = std::get<RealInterval>(e);
    return {0.5 * (i.lo + i.hi), 0.0};
}

double max_distance(const Enclosure& e, Point w)
{
    if (const auto* d = std::get_if<ClosedDisk>(&e))
        return std::abs(d->center - w) + d->radius;
    const auto& i = std::get<RealInterval>(e);
    return std::max(std::abs(Point{i.lo, 0.0} - w), std::abs(Point{i.hi, 0.0} - w));
}

double min_distance(const Enclosure& e, Point w)
{
    if (const auto* d = std::get_if<ClosedDisk>(&e))
        return std::max(0.0, std::abs(d->center - w) - d->radius);
    const auto& i = std::get<RealInterval>(e);
    const double x = std::clamp(w.real(), i.lo, i.hi);
    return std::abs(w - Point{x, 0.0});
}

double annulus_modulus(const RoundAnnulus& a)
{
    if (!(a.inner > 0.0))
        throw Error(ErrorKind::degenerate_annulus, "annulus with inner radius 0 has no finite modulus");
    if (!(a.outer > a.inner))
        throw Error(ErrorKind::degenerate_annulus, "annulus needs inner < outer");
    return std::log(a.outer / a.inner);
}

double set_distance_lower(const Enclosure& a, const Enclosure& b)
{
    const auto* da = std::get_if<ClosedDisk>(&a);
    const auto* db = std::get_if<ClosedDisk>(&b);
    if (da && db)
        return std::max(0.0, std::abs(da->center - db->center) - da->radius - db->radius);
    if (da)
        return std::max(0.0, min_distance(b, da->center) - da->radius);
    if (db)
        return std::max(0.0, min_distance(a, db->center) - db->radius);
    const auto& ia = std::get<RealInterval>(a);
    const auto& ib = std::get<RealInterval>(b);
    return std::max({0.0, ib.lo - ia.hi, ia.lo - ib.hi});
}

double boundary_distance_lower(const Enclosure& e, const ClosedDisk& x)
{
    const double reach = max_distance(e, x.center);
    if (reach > x.radius)
        throw Error(ErrorKind::containment, "enclosure is not contained in the seed disk");
    return x.radius - reach;
}

double boundary_distance_lower(const Enclosure& e, const RealInterval& x)
{
    RealInterval inner;
    if (const auto* d = std::get_if<ClosedDisk>(&e)) {
        if (d->radius != 0.0 || d->center.imag() != 0.0)
            throw Error(ErrorKind::containment, "disk enclosure cannot lie inside an interval seed");
        inner = {d->center.real(), d->center.real()};
    } else {
        inner = std::get<RealInterval>(e);
    }
    if (inner.lo < x.lo || inner.hi > x.hi)
        throw Error(ErrorKind::containment, "interval is not contained in the seed interval");
    return std::min(inner.lo - x.lo, x.hi - inner.hi);
}

double boundary_distance_lower(const Enclosure& e, const Enclosure& x)
{
    return std::visit([&](const auto& seed) { return boundary_distance_lower(e, seed); }, x);
}

bool contains(const ClosedDisk& outer, const ClosedDisk& inner)
{
    return std::abs(inner.center - outer.center) + inner.radius <= outer.radius;
}

bool contains(const Enclosure& outer, const Enclosure& inner)
{
    if (const auto* d = std::get_if<ClosedDisk>(&outer))
        return max_distance(inner, d->center) <= d->radius;
    const auto& o = std::get<RealInterval>(outer);
    if (const auto* d = std::get_if<ClosedDisk>(&inner))
        return d->radius == 0.0 && d->center.imag() == 0.0 && o.lo <= d->center.real() && d->center.real() <= o.hi;
    const auto& i = std::get<RealInterval>(inner);
    return o.lo <= i.lo && i.hi <= o.hi;
}

Side classify(const RoundAnnulus& a, const Enclosure& e)
{
    if (max_distance(e, a.center) <= a.inner)
        return Side::hole;
    if (min_distance(e, a.center) >= a.outer)
        return Side::outside;
    return Side::crossing;
}

bool annulus_separates(const RoundAnnulus& a, std::span<const Enclosure> pieces)
{
    bool in_hole = false;
    bool in_outside = false;
    for (const auto& p : pieces) {
        switch (classify(a, p)) {
        case Side::hole: in_hole = true; break;
        case Side::outside: in_outside = true; break;
        case Side::crossing: return false;
        }
    }
    return in_hole && in_outside;
}

double hyperbolic_distance(const DiskDomain& u, Point z, Point w)
{
    const auto normalize = [&](Point p) {
        const Point q = (p - u.disk.center) / u.disk.radius;
        if (!finite(q) || !(std::abs(q) < 1.0))
            throw Error(ErrorKind::domain, "point is not inside the open domain disk");
        return q;
    };
    const Point a = normalize(z);
    const Point b = normalize(w);
    const double t = std::abs(a - b) / std::abs(1.0 - std::conj(a) * b);
    return 2.0 * std::atanh(t);
}

std::optional<RoundAnnulus> best_separating_annulus_search(std::span<const Point> points,
                                                           Point hole_point,
                                                           std::span<const Point> center_grid,
                                                           std::span<const double> radius_grid)
{
    std::vector<double> radii;
    for (double r : radius_grid)
        if (r > 0.0 && std::isfinite(r))
            radii.push_back(r);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    if (radii.size() < 2 || points.empty())
        return std::nullopt;

    std::optional<RoundAnnulus> best;
    double best_modulus = 0.0;
    std::vector<double> dist(points.size());

    for (const Point c : center_grid) {
        for (std::size_t i = 0; i < points.size(); ++i)
            dist[i] = std::abs(points[i] - c);
        std::sort(dist.begin(), dist.end());
        const double h = std::abs(hole_point - c);

        for (std::size_t k = 0; k + 1 < dist.size(); ++k) {
            if (dist[k] < h || dist[k] == dist[k + 1])
                continue;
            auto lo = std::lower_bound(radii.begin(), radii.end(), dist[k]);
            auto hi = std::upper_bound(radii.begin(), radii.end(), dist[k + 1]);
            if (lo == radii.end() || hi == radii.begin())
                continue;
            const double r = *lo;
            const double big_r = *std::prev(hi);
            if (!(r < big_r))
                continue;
            const double m = std::log(big_r / r);
            if (!best || m > best_modulus) {
                best = RoundAnnulus{c, r, big_r};
                best_modulus = m;
            }
        }
    }
    return best;
}

} // namespace nifs
