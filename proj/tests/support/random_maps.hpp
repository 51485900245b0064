#pragma once

#include "nifs/maps.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace nifs::testing {

// Random branch whose argument disk over d stays well away from 0, with the
// cut pointing away from the argument centre.
inline ConformalMapExpr random_admissible(std::mt19937_64& gen, ClosedDisk& d)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.2, 1.0);
    const Point qa = std::polar(1.0 + 4.0 * pos(gen), std::numbers::pi * u(gen));
    const Point qc{3.0 * u(gen), 3.0 * u(gen)};
    const Point pre = std::polar(0.2 + pos(gen), std::numbers::pi * u(gen));
    d = {{u(gen), u(gen)}, 0.0};
    const Point arg_center = (pre * d.center - qc) / qa;
    // keep |arg centre| > 2 * arg radius
    d.radius = 0.45 * std::abs(arg_center) * std::abs(qa) / std::abs(pre) * pos(gen);
    const SqrtBranch b = make_sqrt_branch(qa, qc, pre, u(gen) < 0 ? -1 : 1, arg_center / std::abs(arg_center));
    switch (gen() % 3) {
    case 0:
        return ConformalMapExpr(b);
    case 1:
        return compose(ConformalMapExpr(AffineMap{{u(gen), u(gen)}, {u(gen), u(gen)}}), ConformalMapExpr(b));
    default: {
        // affine inner factor: adjust the disk so the branch still sees the same argument disk
        const AffineMap inner{std::polar(0.5 + pos(gen), u(gen)), {u(gen), u(gen)}};
        const AffineMap inv{1.0 / inner.a, -inner.b / inner.a};
        d = {inv(d.center), d.radius / std::abs(inner.a)};
        return compose(ConformalMapExpr(b), ConformalMapExpr(inner));
    }
    }
}

} // namespace nifs::testing
