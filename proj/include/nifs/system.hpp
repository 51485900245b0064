#pragma once

#include "nifs/geometry.hpp"
#include "nifs/maps.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace nifs {

struct LabeledMap {
    int label = 1;
    ConformalMapExpr map;
};

// One family Phi^(j): finitely many maps with distinct integer labels, kept
// sorted by label so that word enumeration is lexicographic.
class Stage {
public:
    explicit Stage(std::vector<LabeledMap> maps);

    const std::vector<LabeledMap>& maps() const { return maps_; }
    std::size_t size() const { return maps_.size(); }
    const LabeledMap& by_label(int label) const;
    bool has_label(int label) const;
    int smallest_label() const { return maps_.front().label; }

private:
    std::vector<LabeledMap> maps_;
};

// A finite label string starting at stage `start`.
struct Word {
    int start = 1;
    std::vector<int> labels;

    std::string to_string() const;
    bool operator==(const Word&) const = default;
};

struct PieceEnclosure {
    Word word;
    ConformalMapExpr map;  // the composition phi_word
    Enclosure enclosure;
    double diam_upper = 0.0;
};

struct SystemOptions {
    std::size_t piece_cap = 1'000'000;
    int samples = 256;
};

// A materialized NIFS on (U, K) with geometric seed X inside K. Every map
// sends the closed domain disk into K, and the seed is forward invariant.
// Stages are indexed 1..horizon.
class System {
public:
    System(DiskDomain domain, ClosedDisk compact, Enclosure seed, std::vector<Stage> stages,
           std::string descriptor, SystemOptions options = {});

    int horizon() const { return static_cast<int>(stages_.size()); }
    const Stage& stage(int j) const;
    const std::vector<Stage>& stages() const { return stages_; }

    const DiskDomain& domain() const { return domain_; }
    const ClosedDisk& compact() const { return compact_; }
    const Enclosure& seed() const { return seed_; }
    const std::string& descriptor() const { return descriptor_; }
    const SystemOptions& options() const { return options_; }

    bool interval_mode() const { return std::holds_alternative<RealInterval>(seed_); }

    System with_seed(Enclosure seed) const;

private:
    DiskDomain domain_;
    ClosedDisk compact_;
    Enclosure seed_;
    std::vector<Stage> stages_;
    std::string descriptor_;
    SystemOptions options_;
};

using StageRule = std::function<Stage(int)>;
using LabelStream = std::function<int(int)>;

System assemble(DiskDomain domain, ClosedDisk compact, Enclosure seed, const StageRule& rule, int horizon,
                std::string descriptor, SystemOptions options = {});

/// Number of words of length k starting at stage j; ErrorKind::size above the cap.
std::size_t piece_count(const System& sys, int j, int k);

/// All pieces phi_w(X) for words w over stages j..j+k-1, lexicographic.
/// k == 0 yields the seed itself.
std::vector<PieceEnclosure> pieces(const System& sys, int j, int k);

/// Enclosure of phi_{w_1...w_n}(X) for the stream's first n labels.
/// diam_upper is nonincreasing in n.
PieceEnclosure project(const System& sys, const LabelStream& stream, int n);

struct InvarianceReport {
    bool holds = false;
    double max_discrepancy = 0.0;
    bool interval_mode = false;
    std::size_t compared = 0;
};

/// Checks that the union over i of phi_i^(j)(X_k^(j+1)) equals X_{k+1}^(j).
InvarianceReport invariance_check(const System& sys, int j, int k, double tolerance = 1e-15);

using WordFilter = std::function<bool(const Word&)>;

/// New system whose stage n is the set of compositions across old stages
/// (k_{n-1}, k_n]. An optional filter keeps only some of those words.
System combine_stages(const System& sys, const std::vector<int>& breakpoints, const WordFilter& keep = {});

/// Stage `first` followed by every stage of sys.
System prepend_stage(const System& sys, Stage first);

/// per_leaf points of each depth-n piece (the enclosure center when per_leaf is 1).
std::vector<Point> attractor_sample(const System& sys, int n, int per_leaf = 1);

} // namespace nifs
