#pragma once

#include "nifs/maps.hpp"
#include "nifs/seqlang.hpp"
#include "nifs/system.hpp"

#include <vector>

// Built-in affine systems.
namespace nifs::families {

enum class SeedMode { interval, disk };

/// m equally spaced contractions phi_i(z) = a_j z + (i-1)(1-a_j)/(m-1) on
/// U = D(1/2, 0.7), K = closed D(1/2, 0.6). The seed is [0, 1] in interval
/// mode and K itself in disk mode. Requires 0 < a_j < 1/m.
System cantor(int m, const seq::SeqRule& a_rule, SeedMode mode, int horizon);

AffineMap gap_f1();
AffineMap gap_f2();
AffineMap gap_f3();

/// Stage k is {f1 o f3^(l_k), f2 o f3^(l_k)} on the cantor disk geometry.
/// l_k must be a positive integer.
System gapped(const seq::SeqRule& l_rule, int horizon);

/// The stationary system {f1, f2, f3} with labels 1, 2, 3.
System gap_generator(int horizon);

/// Explicit affine stages; the last listed stage repeats up to the horizon.
System explicit_affine(const std::vector<std::vector<AffineMap>>& stages, int horizon, SeedMode mode);

} // namespace nifs::families
