#include "nifs/families.hpp"

#include "nifs/error.hpp"
#include "nifs/io.hpp"

#include <cmath>

namespace nifs::families {

namespace {

const DiskDomain kDomain{{0.5, 0.7}};
const ClosedDisk kCompact{0.5, 0.6};

Enclosure seed_for(SeedMode mode)
{
    if (mode == SeedMode::interval)
        return RealInterval{0.0, 1.0};
    return kCompact;
}

AffineMap power(const AffineMap& f, int n)
{
    AffineMap out;
    for (int i = 0; i < n; ++i)
        out = compose(out, f);
    return out;
}

} // namespace

System cantor(int m, const seq::SeqRule& a_rule, SeedMode mode, int horizon)
{
    if (m < 2)
        throw Error(ErrorKind::parameter, "cantor family needs m >= 2");
    const StageRule rule = [&](int j) {
        const double a = a_rule(j);
        if (!(a > 0.0 && a < 1.0 / m))
            throw Error(ErrorKind::hypothesis,
                        "a_" + std::to_string(j) + " = " + io::number(a) + " must lie in (0, 1/" + std::to_string(m) + ")",
                        static_cast<std::size_t>(j));
        std::vector<LabeledMap> maps;
        for (int i = 1; i <= m; ++i)
            maps.push_back({i, AffineMap{a, (i - 1) * (1.0 - a) / (m - 1)}});
        return Stage(std::move(maps));
    };
    const std::string desc = "cantor m=" + std::to_string(m) + " a_j=" + a_rule.describe() +
                             (mode == SeedMode::interval ? " seed=[0,1]" : " seed=disk(1/2,0.6)");
    return assemble(kDomain, kCompact, seed_for(mode), rule, horizon, desc);
}

AffineMap gap_f1() { return {1.0 / 3.0, 0.0}; }
AffineMap gap_f2() { return {1.0 / 3.0, 2.0 / 3.0}; }
AffineMap gap_f3() { return {1.0 / 3.0, 1.0 / 3.0}; }

System gapped(const seq::SeqRule& l_rule, int horizon)
{
    const StageRule rule = [&](int k) {
        const double l = l_rule(k);
        if (!(l >= 1.0) || l != std::floor(l) || l > 1000.0)
            throw Error(ErrorKind::hypothesis, "l_" + std::to_string(k) + " = " + io::number(l) +
                                                   " is not a positive integer (at most 1000)",
                        static_cast<std::size_t>(k));
        const AffineMap tail = power(gap_f3(), static_cast<int>(l));
        return Stage({{1, compose(gap_f1(), tail)}, {2, compose(gap_f2(), tail)}});
    };
    return assemble(kDomain, kCompact, kCompact, rule, horizon, "gapped l_k=" + l_rule.describe());
}

System gap_generator(int horizon)
{
    const StageRule rule = [](int) { return Stage({{1, gap_f1()}, {2, gap_f2()}, {3, gap_f3()}}); };
    return assemble(kDomain, kCompact, kCompact, rule, horizon, "gapped generator {f1,f2,f3}");
}

System explicit_affine(const std::vector<std::vector<AffineMap>>& stages, int horizon, SeedMode mode)
{
    if (stages.empty())
        throw Error(ErrorKind::parameter, "explicit system needs at least one stage");
    const StageRule rule = [&](int j) {
        const auto& maps = stages[static_cast<std::size_t>(std::min<int>(j, static_cast<int>(stages.size())) - 1)];
        std::vector<LabeledMap> labeled;
        for (std::size_t i = 0; i < maps.size(); ++i)
            labeled.push_back({static_cast<int>(i) + 1, maps[i]});
        return Stage(std::move(labeled));
    };
    return assemble(kDomain, kCompact, seed_for(mode), rule, horizon,
                    "explicit " + std::to_string(stages.size()) + " stage(s)");
}

} // namespace nifs::families
