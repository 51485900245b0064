#pragma once

#include "nifs/geometry.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nifs {

// z -> a z + b
struct AffineMap {
    Point a{1.0, 0.0};
    Point b{};

    Point operator()(Point z) const { return a * z + b; }
    bool operator==(const AffineMap&) const = default;
};

// One inverse branch of w -> quad_a w^2 + quad_c, precomposed with
// z -> prescale * z:
//
//     z -> sign * sqrt_axis((prescale * z - quad_c) / quad_a)
//
// sqrt_axis is the square root whose cut is the closed ray pointing away
// from `axis` (a unit complex number). axis = 1 is the principal branch.
struct SqrtBranch {
    Point quad_a{1.0, 0.0};
    Point quad_c{};
    Point prescale{1.0, 0.0};
    int sign = 1;
    Point axis{1.0, 0.0};

    Point argument(Point z) const { return (prescale * z - quad_c) / quad_a; }
    bool operator==(const SqrtBranch&) const = default;
};

SqrtBranch make_sqrt_branch(Point quad_a, Point quad_c, Point prescale, int sign, Point axis = {1.0, 0.0});

using Factor = std::variant<AffineMap, SqrtBranch>;

// A finite composition of factors. factors()[0] is applied last, so the
// expression reads left to right like f_0 o f_1 o ... o f_n. Adjacent affine
// factors are always collapsed into one.
class ConformalMapExpr {
public:
    ConformalMapExpr();  // identity
    ConformalMapExpr(AffineMap m);
    ConformalMapExpr(SqrtBranch m);
    explicit ConformalMapExpr(std::vector<Factor> factors);

    const std::vector<Factor>& factors() const { return factors_; }

    bool is_affine() const { return factors_.size() == 1 && std::holds_alternative<AffineMap>(factors_[0]); }
    std::optional<AffineMap> as_affine() const;

    bool operator==(const ConformalMapExpr&) const = default;

private:
    std::vector<Factor> factors_;
};

/// Throws ErrorKind::branch (index = factor position) when a square-root
/// argument falls on its cut.
Point apply(const ConformalMapExpr& m, Point z);

ConformalMapExpr compose(const ConformalMapExpr& outer, const ConformalMapExpr& inner);

AffineMap compose(const AffineMap& outer, const AffineMap& inner);

/// Certified upper bound of |m'| over the closed disk, by the chain rule over
/// per-factor disk enclosures.
double derivative_sup_bound(const ConformalMapExpr& m, const ClosedDisk& d);

/// Closed disk containing m(D). Exact for affine expressions; otherwise the
/// sampled boundary deviation is padded by L * pi * r / samples, where L is
/// derivative_sup_bound(m, D). samples must be at least 16.
ClosedDisk image_disk(const ConformalMapExpr& m, const ClosedDisk& d, int samples = 256);

/// Exact image of an interval under a real affine map (ErrorKind::mode otherwise).
RealInterval image_interval(const AffineMap& m, const RealInterval& i);
RealInterval image_interval(const ConformalMapExpr& m, const RealInterval& i);

Enclosure image(const ConformalMapExpr& m, const Enclosure& e, int samples = 256);

std::string describe(const ConformalMapExpr& m);

} // namespace nifs
