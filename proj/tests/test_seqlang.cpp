#include "nifs/seqlang.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace nifs;
using namespace nifs::seq;

namespace {

double eval(std::string_view s, double j = 1.0) { return evaluate(*parse(s), j); }

// Random well-formed expressions over the whole grammar.
std::string random_expr(std::mt19937_64& gen, int depth)
{
    const auto pick = [&](int n) { return static_cast<int>(gen() % static_cast<unsigned>(n)); };
    if (depth == 0 || pick(4) == 0) {
        switch (pick(4)) {
        case 0:
            return "j";
        case 1:
            return std::to_string(pick(100));
        case 2:
            return std::to_string(pick(10)) + "." + std::to_string(pick(1000));
        default:
            return std::to_string(1 + pick(9)) + "e-" + std::to_string(pick(3));
        }
    }
    switch (pick(7)) {
    case 0:
        return "-" + random_expr(gen, depth - 1);
    case 1:
        return "(" + random_expr(gen, depth - 1) + ")";
    case 2: {
        static const char* fns[] = {"min", "max", "pow"};
        return std::string(fns[pick(3)]) + "(" + random_expr(gen, depth - 1) + ", " + random_expr(gen, depth - 1) + ")";
    }
    default: {
        static const char ops[] = {'+', '-', '*', '/', '^'};
        return random_expr(gen, depth - 1) + " " + ops[pick(5)] + " " + random_expr(gen, depth - 1);
    }
    }
}

} // namespace

TEST_CASE("sequence expressions")
{
    CHECK(eval("1/(j+2)", 1) == doctest::Approx(1.0 / 3).epsilon(1e-16));
    CHECK(eval("2^j", 3) == 8.0);
    CHECK(eval("1/3^(j+1)", 2) == doctest::Approx(1.0 / 27).epsilon(1e-16));
    CHECK(eval("  1 /\t( j + 2 ) ", 3) == doctest::Approx(0.2));
    CHECK(eval("min(j, 4) + max(1, 2) * pow(2, 3)", 7) == 20.0);
    CHECK(eval("1.5e1") == 15.0);
    CHECK(eval(".5") == 0.5);
}

TEST_CASE("precedence")
{
    CHECK(eval("2+3*4") == 14.0);
    CHECK(eval("2^3^2") == 512.0);
    CHECK(eval("-2^2") == -4.0);
    CHECK(eval("(-2)^2") == 4.0);
    CHECK(eval("2^-1") == 0.5);
    CHECK(eval("10-4-3") == 3.0);
    CHECK(eval("16/4/2") == 2.0);
    CHECK(eval("--3") == 3.0);
}

TEST_CASE("syntax errors carry position and expectations")
{
    try {
        parse("1 + * 2");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 4);
        CHECK_FALSE(e.expected().empty());
        CHECK(e.kind() == ErrorKind::syntax);
    }
    try {
        parse("(j + 1");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 6);
        CHECK(std::find(e.expected().begin(), e.expected().end(), ")") != e.expected().end());
    }
    CHECK_THROWS_AS(parse("k + 1"), SyntaxError);
    CHECK_THROWS_AS(parse("sin(j)"), SyntaxError);
    CHECK_THROWS_AS(parse("min(1)"), SyntaxError);
    CHECK_THROWS_AS(parse("pow(1, 2, 3)"), SyntaxError);
    CHECK_THROWS_AS(parse(""), SyntaxError);
    CHECK_THROWS_AS(parse("1 2"), SyntaxError);
    CHECK_THROWS_AS(parse("2 $ 3"), SyntaxError);
    CHECK_THROWS_AS(parse("1e"), SyntaxError);
}

TEST_CASE("arithmetic errors name j and the subexpression")
{
    try {
        eval("1/(j-2)", 2);
        FAIL("expected an arithmetic error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::arithmetic);
        const std::string what = e.what();
        CHECK(what.find("j=2") != std::string::npos);
        CHECK(what.find("(j - 2)") != std::string::npos);
    }
    CHECK_THROWS_AS(eval("(0-1)^0.5"), Error);
    CHECK_THROWS_AS(eval("10^400"), Error);
}

TEST_CASE("rules")
{
    CHECK(SeqRule::constant(1.0 / 3)(17) == 1.0 / 3);
    const auto l = SeqRule::list({1.0 / 3, 0.25, 0.2}, ListTail::repeat_last);
    CHECK(l(7) == 0.2);
    CHECK(l(2) == 0.25);
    const auto strict = SeqRule::list({1.0, 2.0}, ListTail::error);
    CHECK(strict(2) == 2.0);
    CHECK_THROWS_AS(strict(3), Error);
    CHECK(SeqRule::expr("1/(j+2)")(3) == doctest::Approx(0.2));
    CHECK_THROWS_AS(SeqRule::expr("1/(j+2)")(0), Error);
    CHECK_THROWS_AS(SeqRule::constant(std::nan("")), Error);
    CHECK_THROWS_AS(SeqRule::list({}, ListTail::repeat_last), Error);
    try {
        (void)strict(3);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::horizon);
    }
}

TEST_CASE("override rules")
{
    const auto ov = SeqRule::with_override(SeqRule::constant(2.0), "j - 3", SeqRule::expr("2^j"));
    CHECK(ov(3) == 2.0);
    CHECK(ov(1) == 2.0);
    CHECK(ov(4) == 16.0);
    CHECK(ov(2) == 4.0);
    CHECK_THROWS_AS(SeqRule::with_override(SeqRule::constant(1.0), "j +", SeqRule::constant(2.0)), SyntaxError);
}

TEST_CASE("print reparses to the same tree")
{
    std::mt19937_64 gen(7);
    for (int i = 0; i < 200; ++i) {
        const std::string src = random_expr(gen, 5);
        CAPTURE(src);
        const auto a = parse(src);
        const std::string printed = print(*a);
        const auto b = parse(printed);
        CHECK(structurally_equal(*a, *b));
        CHECK(print(*b) == printed);
    }
    CHECK_FALSE(structurally_equal(*parse("j+1"), *parse("1+j")));
    CHECK(structurally_equal(*parse("(((j)))"), *parse("j")));
}
