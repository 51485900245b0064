#include "nifs/julia.hpp"

#include "nifs/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace nifs::julia {

namespace {

unsigned resolve_threads(unsigned threads, std::size_t jobs)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, jobs)));
}

// Runs body(i) for i in [0, n) on `threads` workers with a static stride.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F body)
{
    const unsigned t = resolve_threads(threads, n);
    if (t == 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < t; ++w)
        pool.emplace_back([=, &body] {
            for (std::size_t i = w; i < n; i += t)
                body(i);
        });
    for (auto& th : pool)
        th.join();
}

Point branch_axis(Point quad_a, Point quad_c)
{
    const Point v = -quad_c / quad_a;
    return std::abs(v) > 0.0 ? v / std::abs(v) : Point{1.0, 0.0};
}

std::string complex_text(Point z)
{
    return z.imag() == 0.0 ? io::number(z.real()) : io::number(z.real()) + (z.imag() < 0 ? "" : "+") + io::number(z.imag()) + "i";
}

} // namespace

HypothesisReport check_hypotheses(Point quad_a, Point quad_c)
{
    HypothesisReport r;
    r.mod_c = std::abs(quad_c);
    r.mod_a_minus_mod_c = std::abs(quad_a) - r.mod_c;
    r.crit_value_outside = r.mod_c > 1.0;
    r.preimage_inside = r.mod_a_minus_mod_c > 1.0;
    r.pass = r.crit_value_outside && r.preimage_inside;
    return r;
}

Point coefficient(const PolySeqSpec& spec, int j)
{
    if (j < 1 || j > spec.horizon)
        throw Error(ErrorKind::horizon, "a_" + std::to_string(j) + " is outside 1.." + std::to_string(spec.horizon));
    if (!spec.a_seq)
        throw Error(ErrorKind::parameter, "no coefficient sequence");
    const Point a = spec.a_seq(j);
    if (!(std::abs(a) > 1.0) || !std::isfinite(std::abs(a)))
        throw Error(ErrorKind::hypothesis, "|a_" + std::to_string(j) + "| = " + io::number(std::abs(a)) + " is not > 1",
                    static_cast<std::size_t>(j));
    return a;
}

Point pixel_center(const EscapeGrid& g, int ix, int iy)
{
    const double dx = (g.xmax - g.xmin) / g.nx;
    const double dy = (g.ymax - g.ymin) / g.ny;
    return {g.xmin + (ix + 0.5) * dx, g.ymax - (iy + 0.5) * dy};
}

std::size_t Classification::count_in() const
{
    return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), 0));
}

int classify_point(const std::vector<Point>& a, Point quad_a, Point quad_c, Point z, double radius)
{
    for (std::size_t j = 0; j < a.size(); ++j) {
        z = a[j] * (quad_a * z * z + quad_c);
        const double m = std::abs(z);
        if (!(m <= radius) || m > kOverflowGuard)
            return static_cast<int>(j) + 1;
    }
    return 0;
}

Classification forward_classify(const PolySeqSpec& spec, const EscapeGrid& grid, unsigned threads)
{
    if (!check_hypotheses(spec.quad_a, spec.quad_c).pass)
        throw Error(ErrorKind::hypothesis, "f = a z^2 + c needs |c| > 1 and |a| - |c| > 1");
    if (grid.nx < 1 || grid.ny < 1)
        throw Error(ErrorKind::parameter, "grid resolution must be at least 1x1");
    if (grid.max_stages < 1 || grid.max_stages > spec.horizon)
        throw Error(ErrorKind::horizon, "max stages must lie in 1.." + std::to_string(spec.horizon));
    if (!(grid.xmax > grid.xmin) || !(grid.ymax > grid.ymin))
        throw Error(ErrorKind::parameter, "empty grid window");

    std::vector<Point> a;
    for (int j = 1; j <= grid.max_stages; ++j)
        a.push_back(coefficient(spec, j));

    Classification out{grid.nx, grid.ny, std::vector<int>(static_cast<std::size_t>(grid.nx) * grid.ny)};
    parallel_for(static_cast<std::size_t>(grid.ny), threads, [&](std::size_t iy) {
        for (int ix = 0; ix < grid.nx; ++ix)
            out.cells[iy * grid.nx + ix] = classify_point(a, spec.quad_a, spec.quad_c,
                                                          pixel_center(grid, ix, static_cast<int>(iy)),
                                                          grid.membership_radius);
    });
    return out;
}

System inverse_ifs(const PolySeqSpec& spec, double eps)
{
    if (!check_hypotheses(spec.quad_a, spec.quad_c).pass)
        throw Error(ErrorKind::hypothesis, "f = a z^2 + c needs |c| > 1 and |a| - |c| > 1");
    if (!(eps > 0.0))
        throw Error(ErrorKind::parameter, "eps must be positive");
    const Point axis = branch_axis(spec.quad_a, spec.quad_c);
    const StageRule rule = [&](int j) {
        const Point prescale = 1.0 / coefficient(spec, j);
        return Stage({{1, make_sqrt_branch(spec.quad_a, spec.quad_c, prescale, +1, axis)},
                      {2, make_sqrt_branch(spec.quad_a, spec.quad_c, prescale, -1, axis)}});
    };
    std::string desc = "julia f=" + complex_text(spec.quad_a) + "z^2+" + complex_text(spec.quad_c);
    if (!spec.description.empty())
        desc += " a_j=" + spec.description;
    try {
        return assemble(make_domain(0.0, 1.0 + eps), make_disk(0.0, 1.0), ClosedDisk{0.0, 1.0}, rule, spec.horizon,
                        desc);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::containment && e.kind() != ErrorKind::branch)
            throw;
        throw Error(ErrorKind::hypothesis,
                    std::string("inverse branches do not map D(0, 1+eps) into the unit disk (") + e.what() +
                        "); try a smaller eps",
                    e.index());
    }
}

FloorReport floor_report(Point quad_a, Point quad_c)
{
    const Point axis = branch_axis(quad_a, quad_c);
    const ClosedDisk x{0.0, 1.0};
    const ClosedDisk e1 = image_disk(make_sqrt_branch(quad_a, quad_c, 1.0, +1, axis), x);
    const ClosedDisk e2 = image_disk(make_sqrt_branch(quad_a, quad_c, 1.0, -1, axis), x);
    FloorReport r;
    r.delta0 = set_distance_lower(e1, e2);
    r.eta0 = std::max(e1.diameter(), e2.diameter());
    r.ratio0 = r.delta0 / r.eta0;
    return r;
}

std::string_view to_string(Trend t)
{
    return t == Trend::growing ? "GROWING" : "BOUNDED";
}

std::string DichotomyReport::csv() const
{
    std::string out = "j,a_j_modulus,b_lower,delta_lower,eta_upper,ratio\n";
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const auto& r = stages[i];
        out += std::to_string(r.stage) + "," + io::number(a_modulus[i]) + "," + io::number(r.b_lower) + "," +
               io::number(r.delta_lower) + "," + io::number(r.eta_upper) + "," + io::number(r.ratio) + "\n";
    }
    return out;
}

DichotomyReport dichotomy_report(const System& sys, const PolySeqSpec& spec, int first, int last)
{
    if (first < 1 || last > sys.horizon() || first > last)
        throw Error(ErrorKind::horizon, "stage range must lie in 1.." + std::to_string(sys.horizon()));
    DichotomyReport d;
    d.floor = floor_report(spec.quad_a, spec.quad_c);
    for (int j = first; j <= last; ++j) {
        d.stages.push_back(separation_report(sys, j));
        d.a_modulus.push_back(std::abs(coefficient(spec, j)));
        d.max_ratio = std::max(d.max_ratio, d.stages.back().ratio);
    }
    d.trend = d.max_ratio >= kGrowthFactor * d.floor.ratio0 ? Trend::growing : Trend::bounded;
    return d;
}

DichotomyReport dichotomy_report(const PolySeqSpec& spec, int first, int last)
{
    return dichotomy_report(inverse_ifs(spec), spec, first, last);
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index)
{
    // splitmix64 finalizer over the combined state
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<Point> draw_sequence(const RandomSeqSpec& spec, std::uint64_t subseed)
{
    std::mt19937_64 gen(subseed);
    const auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    std::vector<Point> a;
    a.reserve(static_cast<std::size_t>(std::max(spec.horizon, 0)));
    for (int j = 0; j < spec.horizon; ++j) {
        const double u = unit();
        double mod;
        if (spec.distribution == Distribution::annular_uniform)
            mod = spec.p1 + u * (spec.p2 - spec.p1);
        else
            mod = 1.0 + spec.p2 / std::pow(1.0 - u, 1.0 / spec.p1);
        a.push_back(std::polar(mod, 2.0 * std::numbers::pi * unit()));
    }
    return a;
}

std::string SampleSummary::to_json() const
{
    std::ostringstream os;
    os << "{\n  \"distribution\": "
       << io::quoted(spec.distribution == Distribution::annular_uniform ? "annular-uniform" : "one-plus-pareto")
       << ",\n  \"params\": [" << io::number(spec.p1) << ", " << io::number(spec.p2) << "],\n  \"seed\": " << spec.seed
       << ",\n  \"count\": " << spec.count << ",\n  \"horizon\": " << spec.horizon << ",\n  \"quad_a\": ["
       << io::number(quad_a.real()) << ", " << io::number(quad_a.imag()) << "],\n  \"quad_c\": ["
       << io::number(quad_c.real()) << ", " << io::number(quad_c.imag())
       << "],\n  \"growing_fraction\": " << io::number(growing_fraction) << ",\n  \"sequences\": [";
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        const auto& s = sequences[i];
        os << (i ? ",\n" : "\n") << "    {\"index\": " << s.index << ", \"subseed\": " << s.subseed
           << ", \"max_modulus\": " << io::number(s.max_modulus) << ", \"max_ratio\": " << io::number(s.max_ratio)
           << ", \"trend\": " << io::quoted(to_string(s.trend)) << "}";
    }
    os << (sequences.empty() ? "]\n}\n" : "\n  ]\n}\n");
    return os.str();
}

SampleSummary sample_sequences(const RandomSeqSpec& rand, Point quad_a, Point quad_c, unsigned threads)
{
    if (rand.count < 0 || (rand.count > 0 && rand.horizon < 1))
        throw Error(ErrorKind::parameter, "count must be non-negative and horizon positive");
    if (rand.distribution == Distribution::annular_uniform && !(rand.p1 > 1.0 && rand.p2 >= rand.p1))
        throw Error(ErrorKind::parameter, "annular-uniform needs 1 < min <= max");
    if (rand.distribution == Distribution::one_plus_pareto && !(rand.p1 > 0.0 && rand.p2 > 0.0))
        throw Error(ErrorKind::parameter, "one-plus-pareto needs positive shape and scale");

    SampleSummary s;
    s.spec = rand;
    s.quad_a = quad_a;
    s.quad_c = quad_c;
    if (rand.count == 0)
        return s;
    s.sequences.resize(static_cast<std::size_t>(rand.count));

    parallel_for(s.sequences.size(), threads, [&](std::size_t i) {
        SequenceSummary& out = s.sequences[i];
        out.index = static_cast<int>(i);
        out.subseed = mix_seed(rand.seed, i);
        const auto a = draw_sequence(rand, out.subseed);
        PolySeqSpec spec{quad_a, quad_c, [&a](int j) { return a[static_cast<std::size_t>(j - 1)]; }, rand.horizon, ""};
        const auto d = dichotomy_report(spec, 1, rand.horizon);
        for (double m : d.a_modulus)
            out.max_modulus = std::max(out.max_modulus, m);
        out.max_ratio = d.max_ratio;
        out.trend = d.trend;
    });
    std::size_t growing = 0;
    for (const auto& q : s.sequences)
        growing += q.trend == Trend::growing ? 1 : 0;
    s.growing_fraction = static_cast<double>(growing) / static_cast<double>(s.sequences.size());
    return s;
}

io::Image render(const Classification& c, Palette palette)
{
    if (c.nx < 1 || c.ny < 1 || c.cells.size() != static_cast<std::size_t>(c.nx) * c.ny)
        throw Error(ErrorKind::parameter, "classification matrix is empty or malformed");
    static constexpr std::array<std::array<std::uint8_t, 3>, 8> bands{{{66, 30, 15},
                                                                       {25, 7, 26},
                                                                       {9, 1, 47},
                                                                       {12, 44, 138},
                                                                       {57, 125, 209},
                                                                       {211, 236, 248},
                                                                       {248, 201, 95},
                                                                       {204, 128, 0}}};
    io::Image img{c.nx, c.ny, std::vector<std::uint8_t>(c.cells.size() * 3)};
    for (std::size_t i = 0; i < c.cells.size(); ++i) {
        const int j = c.cells[i];
        std::array<std::uint8_t, 3> px{0, 0, 0};
        if (j > 0) {
            if (palette == Palette::bands) {
                px = bands[static_cast<std::size_t>(j - 1) % bands.size()];
            } else {
                const auto g = static_cast<std::uint8_t>(255 - std::min(j - 1, 200));
                px = {g, g, g};
            }
        }
        std::copy(px.begin(), px.end(), img.rgb.begin() + static_cast<std::ptrdiff_t>(3 * i));
    }
    return img;
}

} // namespace nifs::julia
