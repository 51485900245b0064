#include "nifs/certify.hpp"

#include "nifs/error.hpp"
#include "nifs/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace nifs {

std::string_view to_string(Verdict v)
{
    return v == Verdict::certified ? "certified" : "inconclusive";
}

SeparationReport separation_report(const System& sys, int j)
{
    const Stage& stage = sys.stage(j);
    std::vector<Enclosure> imgs;
    imgs.reserve(stage.size());
    for (const auto& m : stage.maps())
        imgs.push_back(image(m.map, sys.seed(), sys.options().samples));

    SeparationReport r;
    r.stage = j;
    r.b_lower = std::numeric_limits<double>::infinity();
    for (const auto& e : imgs) {
        r.b_lower = std::min(r.b_lower, boundary_distance_lower(e, sys.seed()));
        r.eta_upper = std::max(r.eta_upper, diameter(e));
    }
    if (imgs.size() < 2) {
        r.degenerate = true;
        return r;
    }
    r.delta_lower = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < imgs.size(); ++a)
        for (std::size_t b = a + 1; b < imgs.size(); ++b)
            r.delta_lower = std::min(r.delta_lower, set_distance_lower(imgs[a], imgs[b]));
    r.strong_separation = r.delta_lower > kSeparationFloor;
    r.ratio = r.eta_upper > 0.0 ? r.delta_lower / r.eta_upper : std::numeric_limits<double>::infinity();
    return r;
}

double default_c(const System& sys, std::span<const SeparationReport> reports)
{
    if (reports.empty())
        throw Error(ErrorKind::precondition, "default_c needs at least one report");
    double min_b = std::numeric_limits<double>::infinity();
    for (const auto& r : reports)
        min_b = std::min(min_b, r.b_lower);
    if (!(min_b > 0.0))
        throw Error(ErrorKind::precondition, "no valid c: some stage touches the seed boundary (b = 0)");
    return diameter(sys.seed()) / min_b;
}

RoundAnnulus pushforward_annulus(const ConformalMapExpr& m, const RoundAnnulus& a, Point hole_witness, int samples)
{
    if (samples < 16)
        throw Error(ErrorKind::parameter, "pushforward needs at least 16 samples per circle");
    if (!(std::abs(hole_witness - a.center) <= a.inner))
        throw Error(ErrorKind::parameter, "hole witness is not in the hole of the annulus");
    if (auto f = m.as_affine()) {
        const double s = std::abs(f->a);
        return {(*f)(a.center), s * a.inner, s * a.outer};
    }

    // Also rejects maps that are not admissible on the outer disk.
    const double lip_out = derivative_sup_bound(m, {a.center, a.outer});
    const double lip_in = derivative_sup_bound(m, {a.center, a.inner});
    const Point w = apply(m, hole_witness);

    double inner = 0.0;
    double outer = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const double t = 2.0 * std::numbers::pi * k / samples;
        inner = std::max(inner, std::abs(apply(m, a.center + std::polar(a.inner, t)) - w));
        outer = std::min(outer, std::abs(apply(m, a.center + std::polar(a.outer, t)) - w));
    }
    inner += lip_in * std::numbers::pi * a.inner / samples;
    outer -= lip_out * std::numbers::pi * a.outer / samples;
    if (!(inner > 0.0) || !(outer > inner))
        throw Error(ErrorKind::degenerate_annulus, "pushed annulus has no round sub-annulus after padding");
    return {w, inner, outer};
}

namespace {

struct TreeCheck {
    const System& sys;
    const RoundAnnulus& annulus;
    int level;
    std::span<const int> target;
    bool hole = false;
    bool outside = false;
    bool target_in_hole = false;
    std::size_t nodes = 0;
    std::vector<int> labels;

    bool on_target_path() const
    {
        return target.size() >= labels.size() && std::equal(labels.begin(), labels.end(), target.begin());
    }

    bool run(const ConformalMapExpr& prefix)
    {
        ++nodes;
        const Enclosure e = image(prefix, sys.seed(), sys.options().samples);
        switch (classify(annulus, e)) {
        case Side::outside:
            outside = true;
            return true;
        case Side::hole:
            hole = true;
            if (on_target_path())
                target_in_hole = true;
            return true;
        case Side::crossing:
            break;
        }
        const int depth = static_cast<int>(labels.size());
        if (depth == level)
            return false;
        for (const auto& m : sys.stage(depth + 1).maps()) {
            labels.push_back(m.label);
            const bool ok = run(compose(prefix, m.map));
            labels.pop_back();
            if (!ok)
                return false;
        }
        return true;
    }
};

ConformalMapExpr prefix_map(const System& sys, std::span<const int> word, int length)
{
    ConformalMapExpr m;
    for (int j = 1; j <= length; ++j)
        m = compose(m, sys.stage(j).by_label(word[static_cast<std::size_t>(j - 1)]).map);
    return m;
}

Verdict judge(const std::vector<CertificateEntry>& entries)
{
    std::vector<const CertificateEntry*> ok;
    for (const auto& e : entries)
        if (e.separation_verified)
            ok.push_back(&e);
    if (ok.size() < 3)
        return Verdict::inconclusive;
    for (std::size_t i = 1; i < ok.size(); ++i)
        if (!(ok[i]->modulus_lower > ok[i - 1]->modulus_lower) || !(ok[i]->diameter < ok[i - 1]->diameter))
            return Verdict::inconclusive;
    return Verdict::certified;
}

double safe_log_ratio(double num, double den)
{
    if (!(num > 0.0))
        return -std::numeric_limits<double>::infinity();
    if (!(den > 0.0))
        return std::numeric_limits<double>::infinity();
    return std::log(num / den);
}

} // namespace

LevelSeparation separates_level(const System& sys, const RoundAnnulus& a, int j, std::span<const int> target)
{
    if (j < 1 || j > sys.horizon())
        throw Error(ErrorKind::horizon, "separation level " + std::to_string(j) + " is outside the horizon");
    TreeCheck t{sys, a, j, target, false, false, false, 0, {}};
    const bool ok = t.run(ConformalMapExpr{});
    return {ok && t.hole && t.outside && t.target_in_hole, t.target_in_hole, t.nodes};
}

ThinnessCertificate build_certificate(const System& sys, std::span<const int> subsequence,
                                      const CertificateOptions& options)
{
    if (subsequence.empty())
        throw Error(ErrorKind::precondition, "the subsequence is empty");
    for (std::size_t n = 0; n < subsequence.size(); ++n) {
        const int j = subsequence[n];
        if (j < 1 || j > sys.horizon() || (n > 0 && j <= subsequence[n - 1]))
            throw Error(ErrorKind::precondition,
                        "subsequence must be strictly increasing within 1.." + std::to_string(sys.horizon()), n + 1);
    }

    std::vector<SeparationReport> reports;
    for (std::size_t n = 0; n < subsequence.size(); ++n) {
        reports.push_back(separation_report(sys, subsequence[n]));
        if (reports.back().degenerate)
            throw Error(ErrorKind::precondition,
                        "stage " + std::to_string(subsequence[n]) + " has fewer than two maps (n=" +
                            std::to_string(n + 1) + ")",
                        n + 1);
    }

    const double c = options.c ? *options.c : default_c(sys, reports);
    if (!(c > 1.0) || !std::isfinite(c))
        throw Error(ErrorKind::precondition, "c must be a finite number > 1");
    for (std::size_t n = 0; n < reports.size(); ++n)
        if (reports[n].delta_lower > c * reports[n].b_lower)
            throw Error(ErrorKind::precondition,
                        "delta > c*b at n=" + std::to_string(n + 1) + " (stage " + std::to_string(reports[n].stage) + ")",
                        n + 1);

    const WordRule& rule = options.word_rule;
    const int last = subsequence.back();
    ThinnessCertificate cert;
    cert.system_descriptor = sys.descriptor();
    cert.c = c;
    cert.word_rule = rule.description;
    cert.word.resize(static_cast<std::size_t>(last));
    for (int j = 1, n = 0; j <= last; ++j) {
        const Stage& st = sys.stage(j);
        int label;
        if (n < static_cast<int>(subsequence.size()) && subsequence[static_cast<std::size_t>(n)] == j) {
            label = rule.surrounded ? rule.surrounded(j, st) : st.smallest_label();
            ++n;
        } else {
            label = rule.filler ? rule.filler(j, st) : st.smallest_label();
        }
        if (!st.has_label(label))
            throw Error(ErrorKind::precondition, "word rule chose label " + std::to_string(label) +
                                                     " missing from stage " + std::to_string(j));
        cert.word[static_cast<std::size_t>(j - 1)] = label;
    }

    for (std::size_t n = 0; n < subsequence.size(); ++n) {
        const int j = subsequence[n];
        const SeparationReport& rep = reports[n];
        const int label = cert.word[static_cast<std::size_t>(j - 1)];
        const Enclosure piece = image(sys.stage(j).by_label(label).map, sys.seed(), sys.options().samples);
        const Point z = center_of(piece);
        const double radius_out = rep.delta_lower / c;
        const int idx = static_cast<int>(n) + 1;

        RoundAnnulus base;
        if (auto it = options.base_overrides.find(j); it != options.base_overrides.end()) {
            base = it->second;
        } else {
            if (!(rep.eta_upper < radius_out)) {
                cert.dropped.push_back({idx, j, safe_log_ratio(rep.delta_lower, c * rep.eta_upper),
                                        "eta >= delta/c: base annulus is empty"});
                continue;
            }
            base = {z, rep.eta_upper, radius_out};
        }
        if (!(base.inner > 0.0 && base.outer > base.inner)) {
            cert.dropped.push_back({idx, j, 0.0, "base annulus is degenerate"});
            continue;
        }
        if (classify(base, piece) != Side::hole) {
            cert.dropped.push_back({idx, j, annulus_modulus(base), "surrounded piece is not in the hole"});
            continue;
        }
        const Point witness = std::abs(z - base.center) <= base.inner ? z : base.center;

        RoundAnnulus pushed;
        try {
            pushed = pushforward_annulus(prefix_map(sys, cert.word, j - 1), base, witness, sys.options().samples);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::degenerate_annulus && e.kind() != ErrorKind::branch)
                throw;
            cert.dropped.push_back({idx, j, annulus_modulus(base), e.what()});
            continue;
        }

        CertificateEntry entry;
        entry.n = idx;
        entry.stage = j;
        entry.label = label;
        entry.base = base;
        entry.pushed = pushed;
        entry.modulus_lower = std::min(annulus_modulus(pushed), annulus_modulus(base));
        entry.diameter = 2.0 * pushed.outer;
        const std::span<const int> target(cert.word.data(), static_cast<std::size_t>(j));
        entry.separation_verified = separates_level(sys, pushed, j, target).separated;
        cert.entries.push_back(entry);
    }

    cert.verdict = judge(cert.entries);
    const auto deepest = project(sys, [&](int j) { return cert.word[static_cast<std::size_t>(j - 1)]; }, last);
    cert.witness = center_of(deepest.enclosure);
    return cert;
}

ThinnessCertificate push_forward_certificate(const System& extended, const ThinnessCertificate& cert, int label)
{
    const ConformalMapExpr& map = extended.stage(1).by_label(label).map;
    ThinnessCertificate out;
    out.system_descriptor = extended.descriptor();
    out.c = cert.c;
    out.word_rule = "omega_1=" + std::to_string(label) + " then " + cert.word_rule;
    out.word.push_back(label);
    out.word.insert(out.word.end(), cert.word.begin(), cert.word.end());

    for (const auto& e : cert.entries) {
        CertificateEntry f = e;
        f.stage = e.stage + 1;
        f.pushed = pushforward_annulus(map, e.pushed, e.pushed.center, extended.options().samples);
        f.modulus_lower = std::min(e.modulus_lower, annulus_modulus(f.pushed));
        f.diameter = 2.0 * f.pushed.outer;
        const std::span<const int> target(out.word.data(), static_cast<std::size_t>(f.stage));
        f.separation_verified = separates_level(extended, f.pushed, f.stage, target).separated;
        out.entries.push_back(f);
    }
    out.verdict = judge(out.entries);
    if (!out.word.empty()) {
        const auto deepest = project(extended, [&](int j) { return out.word[static_cast<std::size_t>(j - 1)]; },
                                     static_cast<int>(out.word.size()));
        out.witness = center_of(deepest.enclosure);
    }
    return out;
}

VerifyResult verify_certificate(const System& sys, const ThinnessCertificate& cert)
{
    const auto fail = [](std::string why, std::optional<std::size_t> entry = std::nullopt) {
        return VerifyResult{false, std::move(why), entry};
    };

    std::size_t claimed = 0;
    for (const auto& e : cert.entries)
        claimed += e.separation_verified ? 1 : 0;
    if (claimed < 3)
        return fail("insufficient entries: " + std::to_string(claimed) + " verified, need 3");
    if (cert.verdict != Verdict::certified)
        return fail("certificate verdict is not 'certified'");

    const int max_stage = static_cast<int>(cert.word.size());
    if (max_stage > sys.horizon())
        return fail("word is longer than the system horizon");
    for (int j = 1; j <= max_stage; ++j)
        if (!sys.stage(j).has_label(cert.word[static_cast<std::size_t>(j - 1)]))
            return fail("word label at stage " + std::to_string(j) + " is not in the stage");

    const CertificateEntry* prev = nullptr;
    for (std::size_t i = 0; i < cert.entries.size(); ++i) {
        const auto& e = cert.entries[i];
        const auto tag = "entry " + std::to_string(i + 1) + ": ";
        if (e.stage < 1 || e.stage > max_stage)
            return fail(tag + "stage index outside the word", i);
        if (i > 0 && (e.stage <= cert.entries[i - 1].stage || e.n <= cert.entries[i - 1].n))
            return fail(tag + "stage indices are not strictly increasing", i);
        if (cert.word[static_cast<std::size_t>(e.stage - 1)] != e.label)
            return fail(tag + "m_n does not match the word", i);
        if (!e.separation_verified)
            continue;
        if (!(e.base.inner > 0.0 && e.base.outer > e.base.inner && e.pushed.inner > 0.0 && e.pushed.outer > e.pushed.inner))
            return fail(tag + "degenerate annulus", i);
        if (!(e.modulus_lower > 0.0) || e.modulus_lower > annulus_modulus(e.base) ||
            e.modulus_lower > annulus_modulus(e.pushed))
            return fail(tag + "modulus lower bound exceeds the annulus moduli", i);
        if (!(e.diameter >= 2.0 * e.pushed.outer))
            return fail(tag + "diameter is smaller than the pushed annulus", i);

        const std::span<const int> target(cert.word.data(), static_cast<std::size_t>(e.stage));
        const auto sep = separates_level(sys, e.pushed, e.stage, target);
        if (!sep.target_in_hole)
            return fail(tag + "the piece of omega is not surrounded", i);
        if (!sep.separated)
            return fail(tag + "annulus does not separate the level pieces", i);

        if (prev) {
            if (!(e.modulus_lower > prev->modulus_lower))
                return fail(tag + "moduli are not strictly increasing", i);
            if (!(e.diameter < prev->diameter))
                return fail(tag + "diameters are not strictly decreasing", i);
        }
        prev = &e;
    }
    return {true, "certified prefix of length " + std::to_string(claimed), std::nullopt};
}

namespace {

std::string annulus_json(const RoundAnnulus& a)
{
    return "{\"center\": [" + io::number(a.center.real()) + ", " + io::number(a.center.imag()) +
           "], \"r\": " + io::number(a.inner) + ", \"R\": " + io::number(a.outer) + "}";
}

RoundAnnulus annulus_from(const nlohmann::json& j)
{
    return {{j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>()}, j.at("r").get<double>(),
            j.at("R").get<double>()};
}

} // namespace

std::string certificate_to_json(const ThinnessCertificate& cert)
{
    std::ostringstream os;
    os << "{\n";
    os << "  \"system_descriptor\": " << io::quoted(cert.system_descriptor) << ",\n";
    os << "  \"c\": " << io::number(cert.c) << ",\n";
    os << "  \"word_rule\": " << io::quoted(cert.word_rule) << ",\n";
    os << "  \"word\": [";
    for (std::size_t i = 0; i < cert.word.size(); ++i)
        os << (i ? ", " : "") << cert.word[i];
    os << "],\n";
    os << "  \"entries\": [";
    for (std::size_t i = 0; i < cert.entries.size(); ++i) {
        const auto& e = cert.entries[i];
        os << (i ? ",\n" : "\n");
        os << "    {\"n\": " << e.n << ", \"j_n\": " << e.stage << ", \"m_n\": " << e.label
           << ", \"base\": " << annulus_json(e.base) << ", \"pushed\": " << annulus_json(e.pushed)
           << ", \"modulusLower\": " << io::number(e.modulus_lower) << ", \"diameter\": " << io::number(e.diameter)
           << ", \"separationVerified\": " << (e.separation_verified ? "true" : "false") << "}";
    }
    os << (cert.entries.empty() ? "],\n" : "\n  ],\n");
    os << "  \"verdict\": " << io::quoted(to_string(cert.verdict)) << "\n";
    os << "}\n";
    return os.str();
}

ThinnessCertificate certificate_from_json(std::string_view text)
{
    try {
        const auto j = nlohmann::json::parse(text);
        ThinnessCertificate c;
        c.system_descriptor = j.at("system_descriptor").get<std::string>();
        c.c = j.at("c").get<double>();
        c.word_rule = j.at("word_rule").get<std::string>();
        c.word = j.at("word").get<std::vector<int>>();
        for (const auto& e : j.at("entries")) {
            CertificateEntry x;
            x.n = e.at("n").get<int>();
            x.stage = e.at("j_n").get<int>();
            x.label = e.at("m_n").get<int>();
            x.base = annulus_from(e.at("base"));
            x.pushed = annulus_from(e.at("pushed"));
            x.modulus_lower = e.at("modulusLower").get<double>();
            x.diameter = e.at("diameter").get<double>();
            x.separation_verified = e.at("separationVerified").get<bool>();
            c.entries.push_back(x);
        }
        const auto v = j.at("verdict").get<std::string>();
        if (v != "certified" && v != "inconclusive")
            throw Error(ErrorKind::config, "unknown verdict '" + v + "'");
        c.verdict = v == "certified" ? Verdict::certified : Verdict::inconclusive;
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::config, std::string("malformed certificate: ") + e.what());
    }
}

} // namespace nifs
