#pragma once

#include "nifs/certify.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nifs::testing {

// Ten corruptions of a certified certificate, each of which a verifier must
// reject. Needs at least four entries.
inline std::vector<std::pair<std::string, ThinnessCertificate>> injected_faults(const ThinnessCertificate& good)
{
    std::vector<std::pair<std::string, ThinnessCertificate>> out;
    auto add = [&](std::string name, auto edit) {
        ThinnessCertificate c = good;
        edit(c.entries);
        out.emplace_back(std::move(name), std::move(c));
    };
    add("annulus moved onto a neighbouring piece",
        [](auto& e) { e[1].pushed.center += 0.5 * (e[1].pushed.inner + e[1].pushed.outer); });
    add("outer radius inflated into other pieces", [](auto& e) {
        e[1].pushed.outer *= 40.0;
        e[1].diameter = 2.0 * e[1].pushed.outer;
    });
    add("inner radius shrunk through the surrounded piece", [](auto& e) { e[2].pushed.inner *= 1e-3; });
    add("moduli of two entries swapped", [](auto& e) { std::swap(e[1].modulus_lower, e[2].modulus_lower); });
    add("equal consecutive moduli", [](auto& e) { e[2].modulus_lower = e[1].modulus_lower; });
    add("equal consecutive diameters", [](auto& e) { e[2].diameter = e[1].diameter; });
    add("last diameter larger than the first", [](auto& e) { e.back().diameter = 2.0 * e.front().diameter; });
    add("modulus above the base annulus modulus",
        [](auto& e) { e[2].modulus_lower = annulus_modulus(e[2].base) + 1.0; });
    add("surrounded label changed", [](auto& e) { e[1].label = e[1].label == 1 ? 2 : 1; });
    add("duplicated stage index", [](auto& e) { e[2].stage = e[1].stage; });
    return out;
}

} // namespace nifs::testing
