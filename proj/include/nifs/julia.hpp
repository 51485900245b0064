#pragma once

#include "nifs/certify.hpp"
#include "nifs/geometry.hpp"
#include "nifs/io.hpp"
#include "nifs/system.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

// Non-autonomous Julia sets of P_j = a_j f with f(z) = a z^2 + c.
namespace nifs::julia {

struct HypothesisReport {
    double mod_c = 0.0;
    double mod_a_minus_mod_c = 0.0;
    bool crit_value_outside = false;  // |c| > 1
    bool preimage_inside = false;     // |a| - |c| > 1
    bool pass = false;
};

HypothesisReport check_hypotheses(Point quad_a, Point quad_c);

struct PolySeqSpec {
    Point quad_a{4.0, 0.0};
    Point quad_c{2.0, 0.0};
    std::function<Point(int)> a_seq;
    int horizon = 0;
    std::string description;
};

/// a_j, checked against the horizon and |a_j| > 1.
Point coefficient(const PolySeqSpec& spec, int j);

struct EscapeGrid {
    double xmin = -1.1;
    double xmax = 1.1;
    double ymin = -1.1;
    double ymax = 1.1;
    int nx = 1;
    int ny = 1;
    int max_stages = 1;
    double membership_radius = 1.0;
};

// Row 0 is the top of the window.
Point pixel_center(const EscapeGrid& g, int ix, int iy);

struct Classification {
    int nx = 0;
    int ny = 0;
    std::vector<int> cells;  // 0 = IN, j > 0 = first escape at stage j

    int at(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * nx + ix]; }
    std::size_t count_in() const;
};

inline constexpr double kOverflowGuard = 1e10;

/// 0 if the first K partial compositions stay in the closed membership
/// disk, otherwise the first stage that leaves it.
int classify_point(const std::vector<Point>& a, Point quad_a, Point quad_c, Point z, double radius);

/// threads = 0 uses the hardware concurrency.
Classification forward_classify(const PolySeqSpec& spec, const EscapeGrid& grid, unsigned threads = 0);

/// The inverse-branch system on U = D(0, 1 + eps), X = closed unit disk.
/// Label 1 is the + branch, label 2 the - branch.
System inverse_ifs(const PolySeqSpec& spec, double eps = 0.05);

// a_j independent quantities from the inverse branches of f on the closed
// unit disk: delta0 bounds every stage's delta from below.
struct FloorReport {
    double delta0 = 0.0;
    double eta0 = 0.0;
    double ratio0 = 0.0;
};

FloorReport floor_report(Point quad_a, Point quad_c);

enum class Trend { bounded, growing };

std::string_view to_string(Trend t);

struct DichotomyReport {
    std::vector<SeparationReport> stages;
    std::vector<double> a_modulus;
    FloorReport floor;
    double max_ratio = 0.0;
    Trend trend = Trend::bounded;

    std::string csv() const;
};

// Growing when some stage ratio reaches this multiple of ratio0.
inline constexpr double kGrowthFactor = 10.0;

DichotomyReport dichotomy_report(const PolySeqSpec& spec, int first, int last);
DichotomyReport dichotomy_report(const System& sys, const PolySeqSpec& spec, int first, int last);

enum class Distribution { annular_uniform, one_plus_pareto };

struct RandomSeqSpec {
    Distribution distribution = Distribution::one_plus_pareto;
    // annular_uniform: min and max modulus. one_plus_pareto: shape and scale.
    double p1 = 1.0;
    double p2 = 1.0;
    std::uint64_t seed = 0;
    int count = 0;
    int horizon = 0;
};

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

/// The first `horizon` draws of the sequence with the given sub-seed.
std::vector<Point> draw_sequence(const RandomSeqSpec& spec, std::uint64_t subseed);

struct SequenceSummary {
    int index = 0;
    std::uint64_t subseed = 0;
    double max_modulus = 0.0;
    double max_ratio = 0.0;
    Trend trend = Trend::bounded;
};

struct SampleSummary {
    RandomSeqSpec spec;
    Point quad_a;
    Point quad_c;
    std::vector<SequenceSummary> sequences;
    double growing_fraction = 0.0;

    std::string to_json() const;
};

SampleSummary sample_sequences(const RandomSeqSpec& rand, Point quad_a, Point quad_c, unsigned threads = 0);

enum class Palette { bands, grayscale };

io::Image render(const Classification& c, Palette palette = Palette::bands);

} // namespace nifs::julia
