#include "nifs/maps.hpp"

#include "nifs/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nifs {

namespace {

bool is_identity(const Factor& f)
{
    const auto* a = std::get_if<AffineMap>(&f);
    return a && a->a == Point{1.0, 0.0} && a->b == Point{};
}

// Appends f, merging it into a trailing affine factor when both are affine.
void push_factor(std::vector<Factor>& out, const Factor& f)
{
    if (!out.empty()) {
        auto* last = std::get_if<AffineMap>(&out.back());
        const auto* next = std::get_if<AffineMap>(&f);
        if (last && next) {
            *last = compose(*last, *next);
            return;
        }
    }
    out.push_back(f);
}

std::vector<Factor> normalize(const std::vector<Factor>& in)
{
    std::vector<Factor> out;
    for (const auto& f : in)
        push_factor(out, f);
    if (out.size() > 1)
        std::erase_if(out, is_identity);
    if (out.empty())
        out.emplace_back(AffineMap{});
    return out;
}

// Distance from p to the closed ray (-inf, 0].
double distance_to_negative_axis(Point p)
{
    return p.real() >= 0.0 ? std::abs(p) : std::abs(p.imag());
}

Point branch_sqrt(const SqrtBranch& s, Point w, std::size_t index)
{
    const Point rotated = w * std::conj(s.axis);
    if (rotated.imag() == 0.0 && rotated.real() <= 0.0)
        throw Error(ErrorKind::branch, "square-root argument on the branch cut at factor " + std::to_string(index), index);
    return static_cast<double>(s.sign) * std::sqrt(s.axis) * std::sqrt(rotated);
}

struct Walk {
    double lipschitz = 1.0;
    ClosedDisk coarse;
};

// Pushes a disk through the factors innermost first, bounding |f'| on each
// intermediate enclosure.
Walk walk(const ConformalMapExpr& m, const ClosedDisk& d)
{
    Walk w{1.0, d};
    const auto& fs = m.factors();
    for (std::size_t k = fs.size(); k-- > 0;) {
        if (const auto* a = std::get_if<AffineMap>(&fs[k])) {
            const double s = std::abs(a->a);
            w.lipschitz *= s;
            w.coarse = {(*a)(w.coarse.center), s * w.coarse.radius};
            continue;
        }
        const auto& s = std::get<SqrtBranch>(fs[k]);
        const double scale = std::abs(s.prescale) / std::abs(s.quad_a);
        const ClosedDisk arg{s.argument(w.coarse.center), scale * w.coarse.radius};
        if (!(distance_to_negative_axis(arg.center * std::conj(s.axis)) > arg.radius))
            throw Error(ErrorKind::branch, "disk meets the branch cut of factor " + std::to_string(k), k);
        const double min_arg = std::abs(arg.center) - arg.radius;
        const double sqrt_lip = 0.5 / std::sqrt(min_arg);
        w.lipschitz *= scale * sqrt_lip;
        w.coarse = {branch_sqrt(s, arg.center, k), sqrt_lip * arg.radius};
    }
    return w;
}

} // namespace

SqrtBranch make_sqrt_branch(Point quad_a, Point quad_c, Point prescale, int sign, Point axis)
{
    if (quad_a == Point{} || prescale == Point{})
        throw Error(ErrorKind::parameter, "square-root branch needs quad_a != 0 and prescale != 0");
    if (sign != 1 && sign != -1)
        throw Error(ErrorKind::parameter, "square-root branch sign must be +1 or -1");
    if (!(std::abs(axis) > 0.0))
        throw Error(ErrorKind::parameter, "square-root branch axis must be nonzero");
    return {quad_a, quad_c, prescale, sign, axis / std::abs(axis)};
}

ConformalMapExpr::ConformalMapExpr() : factors_{AffineMap{}} {}

ConformalMapExpr::ConformalMapExpr(AffineMap m) : factors_{m}
{
    if (m.a == Point{})
        throw Error(ErrorKind::parameter, "affine map needs a != 0");
}

ConformalMapExpr::ConformalMapExpr(SqrtBranch m) : factors_{m} {}

ConformalMapExpr::ConformalMapExpr(std::vector<Factor> factors) : factors_(normalize(factors)) {}

std::optional<AffineMap> ConformalMapExpr::as_affine() const
{
    if (!is_affine())
        return std::nullopt;
    return std::get<AffineMap>(factors_[0]);
}

AffineMap compose(const AffineMap& outer, const AffineMap& inner)
{
    return {outer.a * inner.a, outer.a * inner.b + outer.b};
}

ConformalMapExpr compose(const ConformalMapExpr& outer, const ConformalMapExpr& inner)
{
    std::vector<Factor> fs = outer.factors();
    fs.insert(fs.end(), inner.factors().begin(), inner.factors().end());
    return ConformalMapExpr(std::move(fs));
}

Point apply(const ConformalMapExpr& m, Point z)
{
    const auto& fs = m.factors();
    for (std::size_t k = fs.size(); k-- > 0;) {
        if (const auto* a = std::get_if<AffineMap>(&fs[k]))
            z = (*a)(z);
        else {
            const auto& s = std::get<SqrtBranch>(fs[k]);
            z = branch_sqrt(s, s.argument(z), k);
        }
    }
    return z;
}

double derivative_sup_bound(const ConformalMapExpr& m, const ClosedDisk& d)
{
    return walk(m, d).lipschitz;
}

ClosedDisk image_disk(const ConformalMapExpr& m, const ClosedDisk& d, int samples)
{
    if (samples < 16)
        throw Error(ErrorKind::parameter, "image_disk needs at least 16 boundary samples");
    if (auto a = m.as_affine())
        return {(*a)(d.center), std::abs(a->a) * d.radius};

    const double lip = walk(m, d).lipschitz;
    const Point c = apply(m, d.center);
    if (d.radius == 0.0)
        return {c, 0.0};

    double dev = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double t = 2.0 * std::numbers::pi * k / samples;
        const Point z = d.center + std::polar(d.radius, t);
        dev = std::max(dev, std::abs(apply(m, z) - c));
    }
    // Every boundary point is within arc length pi r / samples of a sample.
    return {c, dev + lip * std::numbers::pi * d.radius / samples};
}

RealInterval image_interval(const AffineMap& m, const RealInterval& i)
{
    if (m.a.imag() != 0.0 || m.b.imag() != 0.0)
        throw Error(ErrorKind::mode, "interval images need real affine coefficients");
    const double x = m.a.real() * i.lo + m.b.real();
    const double y = m.a.real() * i.hi + m.b.real();
    return {std::min(x, y), std::max(x, y)};
}

RealInterval image_interval(const ConformalMapExpr& m, const RealInterval& i)
{
    auto a = m.as_affine();
    if (!a)
        throw Error(ErrorKind::mode, "interval images need an affine map");
    return image_interval(*a, i);
}

Enclosure image(const ConformalMapExpr& m, const Enclosure& e, int samples)
{
    if (const auto* d = std::get_if<ClosedDisk>(&e))
        return image_disk(m, *d, samples);
    return image_interval(m, std::get<RealInterval>(e));
}

std::string describe(const ConformalMapExpr& m)
{
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& f : m.factors()) {
        if (!first)
            os << " o ";
        first = false;
        if (const auto* a = std::get_if<AffineMap>(&f))
            os << "affine(a=" << a->a << ",b=" << a->b << ")";
        else {
            const auto& s = std::get<SqrtBranch>(f);
            os << "sqrt(quad_a=" << s.quad_a << ",quad_c=" << s.quad_c << ",prescale=" << s.prescale
               << ",sign=" << s.sign << ",axis=" << s.axis << ")";
        }
    }
    return os.str();
}

} // namespace nifs
