#include "nifs/certify.hpp"
#include "nifs/error.hpp"
#include "nifs/families.hpp"

#include "support/faults.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace nifs;
using families::SeedMode;

namespace {

std::vector<int> range(int a, int b)
{
    std::vector<int> v(static_cast<std::size_t>(b - a + 1));
    std::iota(v.begin(), v.end(), a);
    return v;
}

const System& harmonic_cantor()
{
    static const System sys = families::cantor(2, seq::SeqRule::expr("1/(j+2)"), SeedMode::disk, 30);
    return sys;
}

const System& gapped_linear(int horizon = 10)
{
    static const System sys10 = families::gapped(seq::SeqRule::expr("j"), 10);
    static const System sys6 = families::gapped(seq::SeqRule::expr("j"), 6);
    return horizon == 10 ? sys10 : sys6;
}

} // namespace

TEST_CASE("separation report for the disk cantor geometry")
{
    const auto sys = families::cantor(2, seq::SeqRule::constant(1.0 / 3), SeedMode::disk, 1);
    const auto r = separation_report(sys, 1);
    CHECK(r.b_lower == doctest::Approx(1.0 / 15).epsilon(1e-12));
    CHECK(r.delta_lower == doctest::Approx(4.0 / 15).epsilon(1e-12));
    CHECK(r.eta_upper == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(r.ratio == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(r.strong_separation);
    CHECK_FALSE(r.degenerate);

    const auto small = families::cantor(2, seq::SeqRule::constant(0.01), SeedMode::disk, 1);
    const auto s = separation_report(small, 1);
    CHECK(s.eta_upper == doctest::Approx(0.012).epsilon(1e-12));
    CHECK(s.ratio > 70.0);

    const DiskDomain u{{0.5, 0.7}};
    const ClosedDisk x{0.5, 0.6};
    const System single(u, x, x, {Stage({{1, AffineMap{1.0 / 3, 0.0}}})}, "single");
    CHECK(separation_report(single, 1).degenerate);
}

TEST_CASE("separation reports are conservative and exact in interval mode")
{
    // closed forms for phi_1 = a z, phi_2 = a z + 1 - a on the disk seed
    for (double a : {1.0 / 3, 0.25, 0.2, 0.1, 0.01}) {
        const auto sys = families::cantor(2, seq::SeqRule::constant(a), SeedMode::disk, 1);
        const auto r = separation_report(sys, 1);
        CHECK(r.b_lower <= 0.1 - 0.1 * a + 1e-15);
        CHECK(r.delta_lower <= 1 - 2.2 * a + 1e-15);
        CHECK(r.eta_upper >= 1.2 * a - 1e-15);
        const auto iv = families::cantor(2, seq::SeqRule::constant(a), SeedMode::interval, 1);
        const auto q = separation_report(iv, 1);
        CHECK(q.b_lower == 0.0);
        CHECK(q.delta_lower == doctest::Approx(1 - 2 * a).epsilon(1e-15));
        CHECK(q.eta_upper == doctest::Approx(a).epsilon(1e-15));
    }
}

TEST_CASE("default c")
{
    const auto sys = families::cantor(2, seq::SeqRule::list({1.0 / 3, 0.25, 0.2}, seq::ListTail::error),
                                      SeedMode::disk, 3);
    std::vector<SeparationReport> reps;
    for (int j = 1; j <= 3; ++j)
        reps.push_back(separation_report(sys, j));
    const double c = default_c(sys, reps);
    CHECK(c == doctest::Approx(18.0).epsilon(1e-12));
    for (const auto& r : reps)
        CHECK(r.delta_lower <= c * r.b_lower);

    const auto iv = families::cantor(2, seq::SeqRule::constant(1.0 / 3), SeedMode::interval, 1);
    const std::vector<SeparationReport> zero{separation_report(iv, 1)};
    CHECK_THROWS_AS(default_c(iv, zero), Error);
}

TEST_CASE("pushforward of annuli")
{
    const RoundAnnulus a{0.5, 0.1, 0.3};
    const auto p = pushforward_annulus(AffineMap{1.0 / 3, 0.0}, a, 0.5);
    CHECK(p.center.real() == doctest::Approx(1.0 / 6));
    CHECK(p.inner == doctest::Approx(1.0 / 30));
    CHECK(p.outer == doctest::Approx(0.1));
    CHECK(annulus_modulus(p) == doctest::Approx(std::log(3.0)));
    CHECK(pushforward_annulus(ConformalMapExpr{}, a, 0.5) == a);
    CHECK_THROWS_AS(pushforward_annulus(AffineMap{0.5, 0.0}, a, 0.9), Error);

    const ConformalMapExpr m(make_sqrt_branch(4.0, 2.0, 1.0, +1, -1.0));
    const RoundAnnulus b{0.0, 0.1, 0.9};
    const auto q = pushforward_annulus(m, b, 0.0);
    CHECK(annulus_modulus(q) >= 0.5 * std::log(9.0));
    // The pushed annulus lies inside the true image: images of the inner
    // circle stay in its closed hole, images of the outer circle outside it.
    for (int k = 0; k < 20000; ++k) {
        const double t = 2 * std::numbers::pi * k / 20000.0;
        CHECK(std::abs(apply(m, std::polar(0.1, t)) - q.center) <= q.inner);
        CHECK(std::abs(apply(m, std::polar(0.9, t)) - q.center) >= q.outer);
    }
    // Pushing a thin annulus through a strongly distorting map leaves no round sub-annulus.
    const ConformalMapExpr strong(make_sqrt_branch(1.0, 2.0, 1.0, +1, -1.0));
    try {
        pushforward_annulus(strong, {0.0, 1.0, 1.05}, 0.0);
        FAIL("expected a degenerate push");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::degenerate_annulus);
    }
}

TEST_CASE("certificate for the cantor family with shrinking ratios")
{
    const auto& sys = harmonic_cantor();
    const auto cert = build_certificate(sys, range(1, 30));
    CHECK(cert.verdict == Verdict::certified);
    CHECK(cert.c == doctest::Approx(18.0).epsilon(1e-12));
    CHECK(cert.entries.size() >= 5);
    for (const auto& e : cert.entries) {
        const auto r = separation_report(sys, e.stage);
        // base annulus identity and surrounding property
        CHECK(annulus_modulus(e.base) == doctest::Approx(std::log(r.delta_lower / (cert.c * r.eta_upper))).epsilon(1e-12));
        const auto piece = image(sys.stage(e.stage).by_label(e.label).map, sys.seed());
        CHECK(classify(e.base, piece) == Side::hole);
        CHECK(e.modulus_lower <= annulus_modulus(e.base));
        CHECK(e.separation_verified);
    }
    for (std::size_t i = 1; i < cert.entries.size(); ++i) {
        CHECK(cert.entries[i].modulus_lower > cert.entries[i - 1].modulus_lower);
        CHECK(cert.entries[i].diameter < cert.entries[i - 1].diameter);
    }
    // stages before the ratio exceeds c are dropped with a non-positive base modulus
    for (const auto& d : cert.dropped)
        CHECK(d.base_modulus <= 0.0);
    CHECK(verify_certificate(sys, cert).ok);
}

TEST_CASE("separation soundness against every level piece")
{
    const auto& sys = gapped_linear(6);
    const auto cert = build_certificate(sys, range(1, 6));
    REQUIRE(cert.entries.size() >= 3);
    for (const auto& e : cert.entries) {
        if (!e.separation_verified)
            continue;
        std::vector<Enclosure> level;
        for (const auto& p : pieces(sys, 1, e.stage))
            level.push_back(p.enclosure);
        CHECK(annulus_separates(e.pushed, level));
        // the piece of the certificate word is in the hole
        const auto own = project(sys, [&](int j) { return cert.word[static_cast<std::size_t>(j - 1)]; }, e.stage);
        CHECK(classify(e.pushed, own.enclosure) == Side::hole);
    }
}

TEST_CASE("gapped certificate")
{
    const auto& sys = gapped_linear();
    const auto cert = build_certificate(sys, range(1, 10));
    CHECK(cert.verdict == Verdict::certified);
    for (const auto& e : cert.entries) {
        const auto r = separation_report(sys, e.stage);
        CHECK(std::abs(r.eta_upper - 1.2 / std::pow(3.0, e.stage + 1)) < 1e-12);
    }
    CHECK(verify_certificate(sys, cert).ok);
}

TEST_CASE("constant stages stay inconclusive")
{
    const auto sys = families::cantor(2, seq::SeqRule::constant(1.0 / 3), SeedMode::disk, 30);
    const auto cert = build_certificate(sys, range(1, 30));
    CHECK(cert.verdict == Verdict::inconclusive);
    const auto v = verify_certificate(sys, cert);
    CHECK_FALSE(v.ok);
}

TEST_CASE("certificate preconditions")
{
    const auto sys = families::cantor(2, seq::SeqRule::constant(1.0 / 3), SeedMode::disk, 4);
    CertificateOptions small_c;
    small_c.c = 2.0;  // delta = 4/15 > 2 * 1/15
    try {
        build_certificate(sys, range(1, 4), small_c);
        FAIL("expected a precondition error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::precondition);
        CHECK(e.index() == 1u);
        CHECK(std::string(e.what()).find("n=1") != std::string::npos);
    }
    CHECK_THROWS_AS(build_certificate(sys, std::vector<int>{2, 2}), Error);
    CHECK_THROWS_AS(build_certificate(sys, std::vector<int>{5}), Error);
    CHECK_THROWS_AS(build_certificate(sys, std::vector<int>{}), Error);

    const DiskDomain u{{0.5, 0.7}};
    const ClosedDisk x{0.5, 0.6};
    const System single(u, x, x, {Stage({{1, AffineMap{1.0 / 3, 0.0}}})}, "single");
    CHECK_THROWS_AS(build_certificate(single, std::vector<int>{1}), Error);
}

TEST_CASE("user supplied base annuli")
{
    const auto& sys = gapped_linear(6);
    const auto plain = build_certificate(sys, range(2, 6));
    CertificateOptions opt;
    const auto& e = plain.entries.front();
    opt.base_overrides[e.stage] = {e.base.center, e.base.inner, 0.5 * (e.base.inner + e.base.outer)};
    const auto cert = build_certificate(sys, range(2, 6), opt);
    CHECK(cert.entries.front().base.outer == doctest::Approx(0.5 * (e.base.inner + e.base.outer)));
}

TEST_CASE("verification rejects injected faults")
{
    const auto& sys = gapped_linear();
    const auto cert = build_certificate(sys, range(1, 10));
    REQUIRE(verify_certificate(sys, cert).ok);
    for (const auto& [name, bad] : testing::injected_faults(cert)) {
        const auto v = verify_certificate(sys, bad);
        CHECK_MESSAGE(!v.ok, name);
    }
    ThinnessCertificate empty = cert;
    empty.entries.clear();
    const auto v = verify_certificate(sys, empty);
    CHECK_FALSE(v.ok);
    CHECK(v.diagnostic.find("insufficient entries") != std::string::npos);

    auto overlap = cert;
    overlap.entries[2].pushed.outer *= 40.0;
    const auto w = verify_certificate(sys, overlap);
    CHECK_FALSE(w.ok);
    CHECK(w.entry == 2u);
    CHECK(w.diagnostic.find("entry 3") != std::string::npos);
}

TEST_CASE("certificate JSON")
{
    const auto& sys = gapped_linear(6);
    const auto cert = build_certificate(sys, range(1, 6));
    const auto text = certificate_to_json(cert);
    const auto back = certificate_from_json(text);
    CHECK(certificate_to_json(back) == text);
    CHECK(back.entries.size() == cert.entries.size());
    CHECK(back.entries[0].pushed == cert.entries[0].pushed);
    CHECK(verify_certificate(sys, back).ok);
    const std::vector<std::string> order{"\"system_descriptor\"", "\"c\"", "\"word_rule\"", "\"word\"", "\"entries\"",
                                         "\"verdict\""};
    std::size_t pos = 0;
    for (const auto& k : order) {
        const auto at = text.find(k, pos);
        REQUIRE(at != std::string::npos);
        pos = at;
    }
    const std::vector<std::string> entry_order{"\"n\"", "\"j_n\"", "\"m_n\"", "\"base\"", "\"pushed\"",
                                               "\"modulusLower\"", "\"diameter\"", "\"separationVerified\""};
    pos = text.find("\"entries\"");
    for (const auto& k : entry_order) {
        const auto at = text.find(k, pos);
        REQUIRE(at != std::string::npos);
        pos = at;
    }
    CHECK_THROWS_AS(certificate_from_json("{\"c\": 1}"), Error);
    CHECK_THROWS_AS(certificate_from_json("not json"), Error);
}

TEST_CASE("certificates push forward through a prepended stage")
{
    const auto& sys = harmonic_cantor();
    const auto cert = build_certificate(sys, range(1, 30));
    REQUIRE(cert.verdict == Verdict::certified);
    const Stage first({{1, AffineMap{1.0 / 3, 0.0}}, {2, AffineMap{1.0 / 3, 2.0 / 3}}});
    const auto ext = prepend_stage(sys, first);
    for (int label : {1, 2}) {
        const auto pushed = push_forward_certificate(ext, cert, label);
        CHECK(pushed.verdict == Verdict::certified);
        CHECK(pushed.word.front() == label);
        CHECK(pushed.entries.size() == cert.entries.size());
        CHECK(pushed.entries.front().stage == cert.entries.front().stage + 1);
        const auto v = verify_certificate(ext, pushed);
        CHECK_MESSAGE(v.ok, v.diagnostic);
    }
}
