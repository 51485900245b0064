#include "nifs/system.hpp"

#include "nifs/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace nifs {

Stage::Stage(std::vector<LabeledMap> maps) : maps_(std::move(maps))
{
    if (maps_.empty())
        throw Error(ErrorKind::parameter, "a stage needs at least one map");
    std::sort(maps_.begin(), maps_.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
    for (std::size_t i = 1; i < maps_.size(); ++i)
        if (maps_[i].label == maps_[i - 1].label)
            throw Error(ErrorKind::parameter, "duplicate label " + std::to_string(maps_[i].label) + " in stage");
}

const LabeledMap& Stage::by_label(int label) const
{
    auto it = std::lower_bound(maps_.begin(), maps_.end(), label,
                               [](const LabeledMap& m, int l) { return m.label < l; });
    if (it == maps_.end() || it->label != label)
        throw Error(ErrorKind::parameter, "label " + std::to_string(label) + " is not in the stage");
    return *it;
}

bool Stage::has_label(int label) const
{
    return std::any_of(maps_.begin(), maps_.end(), [&](const auto& m) { return m.label == label; });
}

std::string Word::to_string() const
{
    if (labels.empty())
        return "-";
    std::string s;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i)
            s += '.';
        s += std::to_string(labels[i]);
    }
    return s;
}

namespace {

// Room for rounding when a composed map sends the seed onto itself.
Enclosure inflate(const Enclosure& e, double by)
{
    if (const auto* d = std::get_if<ClosedDisk>(&e))
        return ClosedDisk{d->center, d->radius + by};
    const auto& i = std::get<RealInterval>(e);
    return RealInterval{i.lo - by, i.hi + by};
}

void validate(const DiskDomain& domain, const ClosedDisk& compact, const Enclosure& seed,
              const std::vector<Stage>& stages, int samples)
{
    if (!(std::abs(compact.center - domain.disk.center) + compact.radius < domain.disk.radius))
        throw Error(ErrorKind::containment, "compact set is not inside the open domain");
    if (!contains(Enclosure{compact}, seed))
        throw Error(ErrorKind::containment, "seed is not inside the compact set");
    const Enclosure slack_seed = inflate(seed, 1e-12 * diameter(seed));
    for (std::size_t j = 0; j < stages.size(); ++j) {
        for (const auto& m : stages[j].maps()) {
            const std::string where = "stage " + std::to_string(j + 1) + " label " + std::to_string(m.label);
            if (!contains(compact, image_disk(m.map, domain.disk, samples)))
                throw Error(ErrorKind::containment, where + " does not map the domain into the compact set", j + 1);
            if (!contains(slack_seed, image(m.map, seed, samples)))
                throw Error(ErrorKind::containment, where + " does not keep the seed forward invariant", j + 1);
        }
    }
}

void check_range(const System& sys, int j, int k)
{
    if (j < 1 || k < 0)
        throw Error(ErrorKind::parameter, "stage index must be >= 1 and depth >= 0");
    if (j + k - 1 > sys.horizon())
        throw Error(ErrorKind::horizon, "stages " + std::to_string(j) + ".." + std::to_string(j + k - 1) +
                                            " exceed horizon " + std::to_string(sys.horizon()));
}

struct Enumerator {
    const System& sys;
    int start;
    int depth;
    std::vector<PieceEnclosure>& out;
    std::vector<int> labels;

    void run(const ConformalMapExpr& prefix, int level)
    {
        if (level == depth) {
            Enclosure e = image(prefix, sys.seed(), sys.options().samples);
            const double d = diameter(e);
            out.push_back({Word{start, labels}, prefix, std::move(e), d});
            return;
        }
        for (const auto& m : sys.stage(start + level).maps()) {
            labels.push_back(m.label);
            run(compose(prefix, m.map), level + 1);
            labels.pop_back();
        }
    }
};

} // namespace

System::System(DiskDomain domain, ClosedDisk compact, Enclosure seed, std::vector<Stage> stages,
               std::string descriptor, SystemOptions options)
    : domain_(domain), compact_(compact), seed_(std::move(seed)), stages_(std::move(stages)),
      descriptor_(std::move(descriptor)), options_(options)
{
    validate(domain_, compact_, seed_, stages_, options_.samples);
}

const Stage& System::stage(int j) const
{
    if (j < 1 || j > horizon())
        throw Error(ErrorKind::horizon, "stage " + std::to_string(j) + " is outside 1.." + std::to_string(horizon()));
    return stages_[static_cast<std::size_t>(j - 1)];
}

System System::with_seed(Enclosure seed) const
{
    return System(domain_, compact_, std::move(seed), stages_, descriptor_, options_);
}

System assemble(DiskDomain domain, ClosedDisk compact, Enclosure seed, const StageRule& rule, int horizon,
                std::string descriptor, SystemOptions options)
{
    if (horizon < 0)
        throw Error(ErrorKind::parameter, "horizon must be >= 0");
    std::vector<Stage> stages;
    stages.reserve(static_cast<std::size_t>(horizon));
    for (int j = 1; j <= horizon; ++j)
        stages.push_back(rule(j));
    return System(domain, compact, std::move(seed), std::move(stages), std::move(descriptor), options);
}

std::size_t piece_count(const System& sys, int j, int k)
{
    check_range(sys, j, k);
    const std::size_t cap = sys.options().piece_cap;
    std::size_t n = 1;
    for (int i = j; i < j + k; ++i) {
        const std::size_t s = sys.stage(i).size();
        if (n > cap / s)
            throw Error(ErrorKind::size, "more than " + std::to_string(cap) + " pieces requested");
        n *= s;
    }
    if (n > cap)
        throw Error(ErrorKind::size, "more than " + std::to_string(cap) + " pieces requested");
    return n;
}

std::vector<PieceEnclosure> pieces(const System& sys, int j, int k)
{
    std::vector<PieceEnclosure> out;
    out.reserve(piece_count(sys, j, k));
    Enumerator e{sys, j, k, out, {}};
    e.run(ConformalMapExpr{}, 0);
    return out;
}

PieceEnclosure project(const System& sys, const LabelStream& stream, int n)
{
    check_range(sys, 1, n);
    PieceEnclosure p{Word{1, {}}, ConformalMapExpr{}, sys.seed(), diameter(sys.seed())};
    for (int j = 1; j <= n; ++j) {
        const int label = stream(j);
        p.word.labels.push_back(label);
        p.map = compose(p.map, sys.stage(j).by_label(label).map);
        Enclosure next = image(p.map, sys.seed(), sys.options().samples);
        // Both bounds hold for the true piece; clamping keeps rounding from breaking nesting.
        if (auto* in = std::get_if<RealInterval>(&next)) {
            const auto& parent = std::get<RealInterval>(p.enclosure);
            next = RealInterval{std::max(in->lo, parent.lo), std::min(in->hi, parent.hi)};
        }
        p.enclosure = next;
        // The true piece sits inside its parent, so the parent bound stays valid.
        p.diam_upper = std::min(p.diam_upper, diameter(p.enclosure));
    }
    return p;
}

InvarianceReport invariance_check(const System& sys, int j, int k, double tolerance)
{
    check_range(sys, j, k + 1);
    const auto shifted = pieces(sys, j + 1, k);
    const auto direct = pieces(sys, j, k + 1);
    const auto& stage = sys.stage(j);

    InvarianceReport r;
    r.interval_mode = sys.interval_mode();

    if (r.interval_mode) {
        std::vector<RealInterval> lhs;
        for (const auto& m : stage.maps())
            for (const auto& p : shifted)
                lhs.push_back(image_interval(m.map, std::get<RealInterval>(p.enclosure)));
        std::vector<RealInterval> rhs;
        for (const auto& p : direct)
            rhs.push_back(std::get<RealInterval>(p.enclosure));
        const auto order = [](const RealInterval& a, const RealInterval& b) {
            return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
        };
        std::sort(lhs.begin(), lhs.end(), order);
        std::sort(rhs.begin(), rhs.end(), order);
        r.compared = lhs.size();
        if (lhs.size() != rhs.size())
            return r;
        for (std::size_t i = 0; i < lhs.size(); ++i)
            r.max_discrepancy = std::max({r.max_discrepancy, std::abs(lhs[i].lo - rhs[i].lo),
                                          std::abs(lhs[i].hi - rhs[i].hi)});
        r.holds = r.max_discrepancy <= tolerance;
        return r;
    }

    // Word by word: phi_i o phi_w' against phi_{i w'}. Both lists are in the
    // same lexicographic order.
    std::size_t idx = 0;
    bool all_affine = true;
    for (const auto& m : stage.maps()) {
        for (const auto& p : shifted) {
            const auto& q = direct.at(idx++);
            const ConformalMapExpr lhs = compose(m.map, p.map);
            const auto la = lhs.as_affine();
            const auto ra = q.map.as_affine();
            if (la && ra) {
                r.max_discrepancy = std::max({r.max_discrepancy, std::abs(la->a - ra->a), std::abs(la->b - ra->b)});
            } else {
                all_affine = false;
                const ClosedDisk a = image_disk(lhs, std::get<ClosedDisk>(sys.seed()), sys.options().samples);
                const ClosedDisk& b = std::get<ClosedDisk>(q.enclosure);
                r.max_discrepancy = std::max(r.max_discrepancy, std::abs(a.center - b.center) + std::abs(a.radius - b.radius));
            }
        }
    }
    r.compared = idx;
    // Branch enclosures are resampled on both sides; allow for rounding in
    // the square roots.
    const double tol = all_affine ? tolerance : std::max(tolerance, 1e-9);
    r.holds = idx == direct.size() && r.max_discrepancy <= tol;
    return r;
}

System combine_stages(const System& sys, const std::vector<int>& breakpoints, const WordFilter& keep)
{
    if (breakpoints.empty())
        throw Error(ErrorKind::parameter, "combine_stages needs at least one breakpoint");
    std::vector<Stage> stages;
    int prev = 0;
    for (int k : breakpoints) {
        if (k <= prev)
            throw Error(ErrorKind::parameter, "breakpoints must be strictly increasing positive integers");
        const auto block = pieces(sys, prev + 1, k - prev);
        std::vector<LabeledMap> maps;
        for (const auto& p : block)
            if (!keep || keep(p.word))
                maps.push_back({static_cast<int>(maps.size()) + 1, p.map});
        stages.emplace_back(std::move(maps));
        prev = k;
    }
    std::ostringstream d;
    d << sys.descriptor() << " combined at";
    for (int k : breakpoints)
        d << ' ' << k;
    return System(sys.domain(), sys.compact(), sys.seed(), std::move(stages), d.str(), sys.options());
}

System prepend_stage(const System& sys, Stage first)
{
    std::vector<Stage> stages;
    stages.reserve(sys.stages().size() + 1);
    stages.push_back(std::move(first));
    stages.insert(stages.end(), sys.stages().begin(), sys.stages().end());
    return System(sys.domain(), sys.compact(), sys.seed(), std::move(stages), sys.descriptor() + " with prepended stage",
                  sys.options());
}

std::vector<Point> attractor_sample(const System& sys, int n, int per_leaf)
{
    if (per_leaf < 1)
        throw Error(ErrorKind::parameter, "per_leaf must be >= 1");
    const auto ps = pieces(sys, 1, n);
    std::vector<Point> out;
    out.reserve(ps.size() * static_cast<std::size_t>(per_leaf));
    for (const auto& p : ps) {
        if (per_leaf == 1) {
            out.push_back(center_of(p.enclosure));
            continue;
        }
        for (int t = 0; t < per_leaf; ++t) {
            Point z;
            if (const auto* i = std::get_if<RealInterval>(&sys.seed()))
                z = {i->lo + (t + 0.5) / per_leaf * i->length(), 0.0};
            else {
                const auto& d = std::get<ClosedDisk>(sys.seed());
                z = d.center + std::polar(0.5 * d.radius, 2.0 * std::numbers::pi * t / per_leaf);
            }
            out.push_back(apply(p.map, z));
        }
    }
    return out;
}

} // namespace nifs
