#include "nifs/runner.hpp"

#include "nifs/certify.hpp"
#include "nifs/error.hpp"
#include "nifs/families.hpp"
#include "nifs/io.hpp"
#include "nifs/julia.hpp"
#include "nifs/seqlang.hpp"
#include "nifs/system.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace nifs::runner {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what)
{
    throw Error(ErrorKind::config, what);
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where)
{
    if (!obj.is_object())
        config_error(where + " must be an object");
    for (const auto& [key, value] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            config_error("unknown key '" + key + "' in " + where);
}

const json& require(const json& obj, const std::string& key, const std::string& where)
{
    if (!obj.contains(key))
        config_error("missing key '" + key + "' in " + where);
    return obj.at(key);
}

double get_number(const json& v, const std::string& what)
{
    if (!v.is_number())
        config_error(what + " must be a number");
    return v.get<double>();
}

int get_int(const json& v, const std::string& what)
{
    if (!v.is_number_integer())
        config_error(what + " must be an integer");
    return v.get<int>();
}

std::string get_string(const json& v, const std::string& what)
{
    if (!v.is_string())
        config_error(what + " must be a string");
    return v.get<std::string>();
}

Point get_complex(const json& v, const std::string& what)
{
    if (v.is_number())
        return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    config_error(what + " must be a number or [re, im]");
}

// number -> constant, string -> expression, {"list", "tail"}, {"base", "where", "override"}.
seq::SeqRule get_rule(const json& v, const std::string& what)
{
    if (v.is_number())
        return seq::SeqRule::constant(v.get<double>());
    if (v.is_string())
        return seq::SeqRule::expr(v.get<std::string>());
    if (v.is_object() && v.contains("list")) {
        check_keys(v, {"list", "tail"}, what);
        const auto& list = v.at("list");
        if (!list.is_array() || list.empty())
            config_error(what + ".list must be a non-empty array of numbers");
        std::vector<double> values;
        for (const auto& x : list)
            values.push_back(get_number(x, what + ".list entry"));
        const std::string tail = v.contains("tail") ? get_string(v.at("tail"), what + ".tail") : "repeat_last";
        if (tail != "repeat_last" && tail != "error")
            config_error(what + ".tail must be 'repeat_last' or 'error'");
        return seq::SeqRule::list(std::move(values), tail == "error" ? seq::ListTail::error : seq::ListTail::repeat_last);
    }
    if (v.is_object() && v.contains("base")) {
        check_keys(v, {"base", "where", "override"}, what);
        return seq::SeqRule::with_override(get_rule(v.at("base"), what + ".base"),
                                           get_string(require(v, "where", what), what + ".where"),
                                           get_rule(require(v, "override", what), what + ".override"));
    }
    config_error(what + " must be a number, an expression string, a list rule or an override rule");
}

families::SeedMode get_seed_mode(const json& sys)
{
    if (!sys.contains("seed_mode"))
        return families::SeedMode::disk;
    const auto m = get_string(sys.at("seed_mode"), "system.seed_mode");
    if (m == "interval")
        return families::SeedMode::interval;
    if (m == "disk")
        return families::SeedMode::disk;
    config_error("system.seed_mode must be 'interval' or 'disk'");
}

struct Loaded {
    std::string family;
    std::optional<System> sys;
    std::optional<julia::PolySeqSpec> poly;
    std::optional<julia::RandomSeqSpec> random;
    std::shared_ptr<std::vector<Point>> drawn;
};

julia::RandomSeqSpec parse_random(const json& r, int horizon, const RunOptions& opt)
{
    check_keys(r, {"distribution", "shape", "scale", "min", "max", "seed"}, "system.random");
    julia::RandomSeqSpec spec;
    const auto dist = get_string(require(r, "distribution", "system.random"), "system.random.distribution");
    if (dist == "one-plus-pareto") {
        spec.distribution = julia::Distribution::one_plus_pareto;
        spec.p1 = r.contains("shape") ? get_number(r.at("shape"), "shape") : 1.0;
        spec.p2 = r.contains("scale") ? get_number(r.at("scale"), "scale") : 1.0;
    } else if (dist == "annular-uniform") {
        spec.distribution = julia::Distribution::annular_uniform;
        spec.p1 = get_number(require(r, "min", "system.random"), "min");
        spec.p2 = get_number(require(r, "max", "system.random"), "max");
    } else {
        config_error("system.random.distribution must be 'one-plus-pareto' or 'annular-uniform'");
    }
    spec.seed = r.contains("seed") ? r.at("seed").get<std::uint64_t>() : 0;
    if (opt.seed)
        spec.seed = *opt.seed;
    spec.horizon = horizon;
    return spec;
}

Loaded load_system(const json& sys, int horizon, const std::string& action, const RunOptions& opt)
{
    Loaded out;
    out.family = get_string(require(sys, "family", "system"), "system.family");
    const auto& f = out.family;
    if (f == "cantor") {
        check_keys(sys, {"family", "m", "a_rule", "seed_mode"}, "system");
        const int m = sys.contains("m") ? get_int(sys.at("m"), "system.m") : 2;
        out.sys = families::cantor(m, get_rule(require(sys, "a_rule", "system"), "system.a_rule"), get_seed_mode(sys),
                                   horizon);
    } else if (f == "gapped") {
        check_keys(sys, {"family", "l_rule"}, "system");
        out.sys = families::gapped(get_rule(require(sys, "l_rule", "system"), "system.l_rule"), horizon);
    } else if (f == "explicit") {
        check_keys(sys, {"family", "stages", "seed_mode"}, "system");
        const auto& st = require(sys, "stages", "system");
        if (!st.is_array() || st.empty())
            config_error("system.stages must be a non-empty array");
        std::vector<std::vector<AffineMap>> stages;
        for (const auto& s : st) {
            if (!s.is_array() || s.empty())
                config_error("each stage must be a non-empty array of maps");
            auto& maps = stages.emplace_back();
            for (const auto& m : s) {
                check_keys(m, {"a", "b"}, "stage map");
                maps.push_back({get_complex(require(m, "a", "stage map"), "a"),
                                m.contains("b") ? get_complex(m.at("b"), "b") : Point{}});
                if (maps.back().a == Point{})
                    config_error("affine map with a = 0 is constant");
            }
        }
        out.sys = families::explicit_affine(stages, horizon, get_seed_mode(sys));
    } else if (f == "julia") {
        check_keys(sys, {"family", "quad_a", "quad_c", "a_rule", "a_angle", "random", "eps"}, "system");
        julia::PolySeqSpec p;
        p.quad_a = sys.contains("quad_a") ? get_complex(sys.at("quad_a"), "system.quad_a") : Point{4.0, 0.0};
        p.quad_c = sys.contains("quad_c") ? get_complex(sys.at("quad_c"), "system.quad_c") : Point{2.0, 0.0};
        p.horizon = horizon;
        if (sys.contains("random") == sys.contains("a_rule"))
            config_error("julia system needs exactly one of 'a_rule' and 'random'");
        if (sys.contains("random")) {
            out.random = parse_random(sys.at("random"), horizon, opt);
            out.drawn = std::make_shared<std::vector<Point>>(
                julia::draw_sequence(*out.random, julia::mix_seed(out.random->seed, 0)));
            auto drawn = out.drawn;
            p.a_seq = [drawn](int j) { return (*drawn)[static_cast<std::size_t>(j - 1)]; };
            p.description = "random sequence 0";
        } else {
            const auto mod = get_rule(sys.at("a_rule"), "system.a_rule");
            const auto arg = sys.contains("a_angle") ? get_rule(sys.at("a_angle"), "system.a_angle")
                                                     : seq::SeqRule::constant(0.0);
            p.a_seq = [mod, arg](int j) { return std::polar(mod(j), arg(j)); };
            p.description = mod.describe();
        }
        out.poly = p;
        const double eps = sys.contains("eps") ? get_number(sys.at("eps"), "system.eps") : 0.05;
        if (action != "sample" && action != "render")
            out.sys = julia::inverse_ifs(p, eps);
    } else {
        config_error("unknown family '" + f + "' (expected cantor, gapped, julia or explicit)");
    }
    return out;
}

std::filesystem::path resolve_output(const json& cfg, const RunOptions& opt, const std::string& fallback)
{
    std::filesystem::path p = fallback;
    if (cfg.contains("output"))
        p = get_string(cfg.at("output"), "output");
    if (p.is_relative())
        p = opt.out_dir / p;
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    return p;
}

std::string pieces_csv(const std::vector<PieceEnclosure>& ps)
{
    std::string out = "word,kind,center_re,center_im,radius,lo,hi,diam_upper\n";
    for (const auto& p : ps) {
        out += p.word.to_string();
        if (const auto* i = std::get_if<RealInterval>(&p.enclosure)) {
            out += ",interval," + io::number(0.5 * (i->lo + i->hi)) + ",0," + io::number(0.5 * i->length()) + "," +
                   io::number(i->lo) + "," + io::number(i->hi);
        } else {
            const auto& d = std::get<ClosedDisk>(p.enclosure);
            out += ",disk," + io::number(d.center.real()) + "," + io::number(d.center.imag()) + "," +
                   io::number(d.radius) + ",,";
        }
        out += "," + io::number(p.diam_upper) + "\n";
    }
    return out;
}

std::vector<int> parse_subsequence(const json& params, int horizon)
{
    std::vector<int> out;
    if (!params.contains("subsequence") || params.at("subsequence") == "all") {
        out.resize(static_cast<std::size_t>(horizon));
        std::iota(out.begin(), out.end(), 1);
        return out;
    }
    const auto& s = params.at("subsequence");
    if (s.is_array()) {
        for (const auto& x : s)
            out.push_back(get_int(x, "subsequence entry"));
        return out;
    }
    if (s.is_object()) {
        check_keys(s, {"from", "to", "step"}, "params.subsequence");
        const int from = s.contains("from") ? get_int(s.at("from"), "from") : 1;
        const int to = s.contains("to") ? get_int(s.at("to"), "to") : horizon;
        const int step = s.contains("step") ? get_int(s.at("step"), "step") : 1;
        if (step < 1)
            config_error("subsequence step must be >= 1");
        for (int j = from; j <= to; j += step)
            out.push_back(j);
        return out;
    }
    config_error("params.subsequence must be \"all\", an array or {from, to, step}");
}

const System& need_system(const Loaded& l, const std::string& action)
{
    if (!l.sys)
        config_error("action '" + action + "' is not available for this system");
    return *l.sys;
}

const julia::PolySeqSpec& need_julia(const Loaded& l, const std::string& action)
{
    if (!l.poly)
        config_error("action '" + action + "' needs a julia system");
    return *l.poly;
}

RunResult finish(std::string summary, const std::filesystem::path& path, std::string_view contents)
{
    io::write_atomic(path, contents);
    return {std::move(summary) + " -> " + path.string(), {path}};
}

RunResult run_parsed(const json& cfg, std::string action, const RunOptions& opt)
{
    check_keys(cfg, {"system", "horizon", "action", "params", "output"}, "config");
    if (cfg.contains("action")) {
        const auto a = get_string(cfg.at("action"), "action");
        if (!action.empty() && a != action)
            config_error("config action '" + a + "' does not match requested action '" + action + "'");
        action = a;
    }
    if (std::find(kActions.begin(), kActions.end(), action) == kActions.end())
        config_error("unknown action '" + action + "'");
    const int horizon = get_int(require(cfg, "horizon", "config"), "horizon");
    if (horizon < 1)
        config_error("horizon must be >= 1");
    const json params = cfg.contains("params") ? cfg.at("params") : json::object();
    const auto& sys_cfg = require(cfg, "system", "config");
    if (!sys_cfg.is_object())
        config_error("system must be an object");

    if (action == "pieces") {
        check_keys(params, {"start", "depth"}, "params");
        const Loaded l = load_system(sys_cfg, horizon, action, opt);
        const System& sys = need_system(l, action);
        const int start = params.contains("start") ? get_int(params.at("start"), "start") : 1;
        const int depth = params.contains("depth") ? get_int(params.at("depth"), "depth") : std::min(horizon, 3);
        const auto ps = pieces(sys, start, depth);
        double dmax = 0.0;
        for (const auto& p : ps)
            dmax = std::max(dmax, p.diam_upper);
        return finish("pieces: " + std::to_string(ps.size()) + " enclosures at depth " + std::to_string(depth) +
                          " from stage " + std::to_string(start) + ", max diam " + io::number(dmax),
                      resolve_output(cfg, opt, "pieces.csv"), pieces_csv(ps));
    }
    if (action == "certify") {
        check_keys(params, {"subsequence", "c"}, "params");
        const Loaded l = load_system(sys_cfg, horizon, action, opt);
        const System& sys = need_system(l, action);
        CertificateOptions co;
        if (params.contains("c"))
            co.c = get_number(params.at("c"), "params.c");
        const auto subseq = parse_subsequence(params, horizon);
        const auto cert = build_certificate(sys, subseq, co);
        std::size_t verified = 0;
        for (const auto& e : cert.entries)
            verified += e.separation_verified ? 1 : 0;
        std::string s = "certify: verdict " + std::string(to_string(cert.verdict));
        if (cert.verdict == Verdict::certified)
            s += " (certified prefix of length " + std::to_string(verified) + ")";
        s += ", " + std::to_string(cert.entries.size()) + " entries, " + std::to_string(cert.dropped.size()) +
             " dropped, c=" + io::number(cert.c);
        return finish(s, resolve_output(cfg, opt, "certificate.json"), certificate_to_json(cert));
    }
    if (action == "dichotomy") {
        check_keys(params, {"first", "last"}, "params");
        const Loaded l = load_system(sys_cfg, horizon, action, opt);
        const auto& poly = need_julia(l, action);
        const int first = params.contains("first") ? get_int(params.at("first"), "first") : 1;
        const int last = params.contains("last") ? get_int(params.at("last"), "last") : horizon;
        const auto d = julia::dichotomy_report(need_system(l, action), poly, first, last);
        return finish("dichotomy: trend " + std::string(julia::to_string(d.trend)) + " over stages " +
                          std::to_string(first) + ".." + std::to_string(last) + " (max ratio " +
                          io::number(d.max_ratio) + ", floor ratio " + io::number(d.floor.ratio0) + ")",
                      resolve_output(cfg, opt, "dichotomy.csv"), d.csv());
    }
    if (action == "render") {
        check_keys(params, {"window", "nx", "ny", "max_stages", "palette", "membership_radius"}, "params");
        const Loaded l = load_system(sys_cfg, horizon, action, opt);
        const auto& poly = need_julia(l, action);
        julia::EscapeGrid g;
        if (params.contains("window")) {
            const auto& w = params.at("window");
            if (!w.is_array() || w.size() != 4)
                config_error("params.window must be [xmin, xmax, ymin, ymax]");
            g.xmin = get_number(w[0], "window");
            g.xmax = get_number(w[1], "window");
            g.ymin = get_number(w[2], "window");
            g.ymax = get_number(w[3], "window");
        }
        g.nx = params.contains("nx") ? get_int(params.at("nx"), "nx") : 256;
        g.ny = params.contains("ny") ? get_int(params.at("ny"), "ny") : g.nx;
        g.max_stages = params.contains("max_stages") ? get_int(params.at("max_stages"), "max_stages") : horizon;
        if (params.contains("membership_radius"))
            g.membership_radius = get_number(params.at("membership_radius"), "membership_radius");
        julia::Palette pal = julia::Palette::bands;
        if (params.contains("palette")) {
            const auto p = get_string(params.at("palette"), "palette");
            if (p == "grayscale")
                pal = julia::Palette::grayscale;
            else if (p != "bands")
                config_error("palette must be 'bands' or 'grayscale'");
        }
        const auto c = julia::forward_classify(poly, g, opt.threads);
        return finish("render: " + std::to_string(g.nx) + "x" + std::to_string(g.ny) + ", K=" +
                          std::to_string(g.max_stages) + ", IN pixels " + std::to_string(c.count_in()),
                      resolve_output(cfg, opt, "julia.ppm"), io::to_ppm(julia::render(c, pal)));
    }
    if (action == "sample") {
        check_keys(params, {"count"}, "params");
        const Loaded l = load_system(sys_cfg, horizon, action, opt);
        const auto& poly = need_julia(l, action);
        if (!l.random)
            config_error("action 'sample' needs system.random");
        auto spec = *l.random;
        spec.count = params.contains("count") ? get_int(params.at("count"), "count") : 100;
        const auto s = julia::sample_sequences(spec, poly.quad_a, poly.quad_c, opt.threads);
        return finish("sample: growing fraction " + io::number(s.growing_fraction) + " over " +
                          std::to_string(s.sequences.size()) + " sequences of length " + std::to_string(horizon),
                      resolve_output(cfg, opt, "sample.json"), s.to_json());
    }
    // invariance
    check_keys(params, {"max_depth"}, "params");
    const Loaded l = load_system(sys_cfg, horizon, action, opt);
    const System& sys = need_system(l, action);
    const int max_depth =
        params.contains("max_depth") ? get_int(params.at("max_depth"), "max_depth") : std::min(horizon - 1, 6);
    std::string csv = "j,k,holds,compared,max_discrepancy\n";
    std::size_t checks = 0, failures = 0;
    for (int j = 1; j <= horizon; ++j)
        for (int k = 0; k <= max_depth && j + k <= horizon; ++k) {
            const auto r = invariance_check(sys, j, k);
            ++checks;
            failures += r.holds ? 0 : 1;
            csv += std::to_string(j) + "," + std::to_string(k) + "," + (r.holds ? "true" : "false") + "," +
                   std::to_string(r.compared) + "," + io::number(r.max_discrepancy) + "\n";
        }
    return finish("invariance: " + std::to_string(checks - failures) + "/" + std::to_string(checks) + " checks hold",
                  resolve_output(cfg, opt, "invariance.csv"), csv);
}

RunResult run_json(json cfg, const RunOptions& opt)
{
    return run_parsed(cfg, "", opt);
}

RunResult figure1(const RunOptions& opt)
{
    const auto sys = families::cantor(2, seq::SeqRule::list({1.0 / 3, 1.0 / 4, 1.0 / 5}, seq::ListTail::error),
                                      families::SeedMode::interval, 3);
    std::string csv = "j,k,word,lo,hi\n";
    std::size_t rows = 0;
    for (int j = 1; j <= 3; ++j)
        for (int k = 0; j + k - 1 <= 3; ++k)
            for (const auto& p : pieces(sys, j, k)) {
                const auto& i = std::get<RealInterval>(p.enclosure);
                csv += std::to_string(j) + "," + std::to_string(k) + "," + p.word.to_string() + "," +
                       io::number(i.lo) + "," + io::number(i.hi) + "\n";
                ++rows;
            }
    std::string inv = "invariance";
    for (int j = 1; j <= 3; ++j)
        for (int k = 0; j + k <= 3; ++k)
            if (!invariance_check(sys, j, k).holds)
                inv = "INVARIANCE FAILED";
    auto path = opt.out_dir / "figure1.csv";
    std::filesystem::create_directories(opt.out_dir);
    return finish("figure1: " + std::to_string(rows) + " pieces X_k^(j) for a = 1/3, 1/4, 1/5, " + inv + " exact",
                  path, csv);
}

RunResult cantor_separation(const RunOptions& opt)
{
    const auto sys = families::cantor(2, seq::SeqRule::constant(1.0 / 3), families::SeedMode::disk, 1);
    const auto r = separation_report(sys, 1);
    const std::string csv = "j,b_lower,delta_lower,eta_upper,ratio\n1," + io::number(r.b_lower) + "," +
                            io::number(r.delta_lower) + "," + io::number(r.eta_upper) + "," + io::number(r.ratio) + "\n";
    std::filesystem::create_directories(opt.out_dir);
    return finish("cantor-separation: b=" + io::number(r.b_lower) + " delta=" + io::number(r.delta_lower) +
                      " eta=" + io::number(r.eta_upper),
                  opt.out_dir / "cantor-separation.csv", csv);
}

RunResult closure_search(const RunOptions& opt)
{
    std::vector<Point> pts{0.0};
    for (int n = 1; n <= 20; ++n)
        pts.push_back(std::ldexp(1.0, -n));
    std::vector<Point> centers;
    std::vector<double> radii;
    for (int i = 0; i < 1000; ++i)
        centers.push_back(-0.25 + 0.5 * i / 999.0);
    for (int i = 1; i <= 1000; ++i)
        radii.push_back(std::ldexp(1.0, -22) * std::pow(std::ldexp(1.0, 23), (i - 1) / 999.0));
    const auto best = best_separating_annulus_search(pts, 0.0, centers, radii);
    json out;
    if (best) {
        out = {{"center", {best->center.real(), best->center.imag()}},
               {"r", best->inner},
               {"R", best->outer},
               {"modulus", annulus_modulus(*best)},
               {"bound", std::log(2.0)}};
    } else {
        out = {{"annulus", nullptr}, {"bound", std::log(2.0)}};
    }
    std::filesystem::create_directories(opt.out_dir);
    return finish("pointwise-thin-closure: best modulus " +
                      (best ? io::number(annulus_modulus(*best)) : std::string("none")) + " vs log 2 = " +
                      io::number(std::log(2.0)),
                  opt.out_dir / "pointwise-thin-closure.json", out.dump(2) + "\n");
}

json cfg(json system, int horizon, std::string action, json params, std::string output)
{
    return {{"system", std::move(system)},
            {"horizon", horizon},
            {"action", std::move(action)},
            {"params", std::move(params)},
            {"output", std::move(output)}};
}

const json kJulia42 = {{"family", "julia"}, {"quad_a", 4}, {"quad_c", 2}};

json with(json base, const json& extra)
{
    base.update(extra);
    return base;
}

struct PresetDef {
    Preset info;
    std::function<RunResult(const RunOptions&)> run;
};

const std::vector<PresetDef>& preset_table()
{
    static const std::vector<PresetDef> table{
        {{"figure1", "interval pieces X_k^(j) for a_j = 1/3, 1/4, 1/5 with j+k-1 <= 3"}, figure1},
        {{"cantor-certify", "cantor m=2, a_j=1/(j+2), disk seed, certificate over 30 stages"},
         [](const RunOptions& o) {
             return run_json(cfg({{"family", "cantor"}, {"m", 2}, {"a_rule", "1/(j+2)"}, {"seed_mode", "disk"}}, 30,
                                 "certify", json::object(), "cantor-certify.json"),
                             o);
         }},
        {{"cantor-constant", "cantor m=2, a_j=1/3: bounded moduli, inconclusive"},
         [](const RunOptions& o) {
             return run_json(cfg({{"family", "cantor"}, {"m", 2}, {"a_rule", "1/3"}, {"seed_mode", "disk"}}, 30,
                                 "certify", json::object(), "cantor-constant.json"),
                             o);
         }},
        {{"cantor-separation", "b, delta, eta for z/3 and z/3+2/3 on the disk seed"}, cantor_separation},
        {{"example2-2-unbounded", "gapped system with l_k = k, certificate over 10 stages"},
         [](const RunOptions& o) {
             return run_json(cfg({{"family", "gapped"}, {"l_rule", "j"}}, 10, "certify", json::object(),
                                 "example2-2-unbounded.json"),
                             o);
         }},
        {{"gapped-bounded", "gapped system with l_k = 1: inconclusive"},
         [](const RunOptions& o) {
             return run_json(cfg({{"family", "gapped"}, {"l_rule", 1}}, 10, "certify", json::object(),
                                 "gapped-bounded.json"),
                             o);
         }},
        {{"julia-bounded", "f = 4z^2+2, a_j = 2: dichotomy report over 30 stages"},
         [](const RunOptions& o) {
             return run_json(cfg(with(kJulia42, {{"a_rule", 2}}), 30, "dichotomy", json::object(), "julia-bounded.csv"),
                             o);
         }},
        {{"julia-render", "f = 4z^2+2, a_j = 2: 256x256 escape image with K = 20"},
         [](const RunOptions& o) {
             return run_json(cfg(with(kJulia42, {{"a_rule", 2}}), 20, "render",
                                 {{"window", {-1.1, 1.1, -1.1, 1.1}}, {"nx", 256}, {"ny", 256}},
                                 "julia-render.ppm"),
                             o);
         }},
        {{"julia-growing", "f = 4z^2+2, a_j = 2^j: dichotomy report over 20 stages"},
         [](const RunOptions& o) {
             return run_json(cfg(with(kJulia42, {{"a_rule", "2^j"}}), 20, "dichotomy", json::object(),
                                 "julia-growing.csv"),
                             o);
         }},
        {{"julia-sample", "100 one-plus-pareto(1, 1) sequences of length 50"},
         [](const RunOptions& o) {
             return run_json(
                 cfg(with(kJulia42,
                          {{"random", {{"distribution", "one-plus-pareto"}, {"shape", 1}, {"scale", 1}, {"seed", 20240917}}}}),
                     50, "sample", {{"count", 100}}, "julia-sample.json"),
                 o);
         }},
        {{"julia-sample-control", "100 annular-uniform(1.5, 2.5) sequences of length 50"},
         [](const RunOptions& o) {
             return run_json(
                 cfg(with(kJulia42,
                          {{"random", {{"distribution", "annular-uniform"}, {"min", 1.5}, {"max", 2.5}, {"seed", 20240917}}}}),
                     50, "sample", {{"count", 100}}, "julia-sample-control.json"),
                 o);
         }},
        {{"pointwise-thin-closure", "best separating annulus around 0 in {0} u {2^-n : n <= 20}"}, closure_search},
    };
    return table;
}

} // namespace

RunResult run_config(std::string_view json_text, std::string_view action, const RunOptions& options)
{
    json cfg;
    try {
        cfg = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::config, std::string("config is not valid JSON: ") + e.what());
    }
    try {
        return run_parsed(cfg, std::string(action), options);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::config, std::string("config has a value of the wrong type: ") + e.what());
    }
}

std::vector<Preset> presets()
{
    std::vector<Preset> out;
    for (const auto& p : preset_table())
        out.push_back(p.info);
    return out;
}

RunResult run_preset(std::string_view name, const RunOptions& options)
{
    for (const auto& p : preset_table())
        if (p.info.name == name)
            return p.run(options);
    throw Error(ErrorKind::config, "unknown preset '" + std::string(name) + "'");
}

} // namespace nifs::runner
