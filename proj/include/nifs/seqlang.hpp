#pragma once

#include "nifs/error.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// A small expression language for sequence rules such as "1/(j+2)" or "2^j".
//
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?
//   atom  := NUMBER | 'j' | IDENT '(' expr (',' expr)* ')' | '(' expr ')'
//
// '^' is right-associative and binds tighter than unary minus, so "-2^2" is
// -4 and "2^3^2" is 512. Functions: min(x,y), max(x,y), pow(x,y).
namespace nifs::seq {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Number {
    double value = 0.0;
};
struct Var {};
struct Negate {
    ExprPtr operand;
};
struct Binary {
    char op = '+';
    ExprPtr lhs;
    ExprPtr rhs;
};
struct Call {
    std::string name;
    std::vector<ExprPtr> args;
};

struct Expr {
    std::variant<Number, Var, Negate, Binary, Call> node;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t offset, std::vector<std::string> expected)
        : Error(ErrorKind::syntax, what, offset), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

ExprPtr parse(std::string_view source);

// Fully parenthesized; numbers printed with 17 significant digits so the
// output reparses to the same tree.
std::string print(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// Throws ErrorKind::arithmetic on division by zero or a non-finite result.
double evaluate(const Expr& e, double j);

enum class ListTail { repeat_last, error };

class SeqRule {
public:
    static SeqRule constant(double v);
    static SeqRule list(std::vector<double> values, ListTail tail);
    static SeqRule expr(std::string_view source);
    // Uses `override_rule` at indices where `predicate` evaluates nonzero.
    static SeqRule with_override(SeqRule base, std::string_view predicate, SeqRule override_rule);

    double operator()(int j) const;
    std::string describe() const;

private:
    struct Constant {
        double value;
    };
    struct List {
        std::vector<double> values;
        ListTail tail;
    };
    struct ExprRule {
        ExprPtr expr;
        std::string source;
    };
    struct Override {
        std::shared_ptr<const SeqRule> base;
        ExprPtr predicate;
        std::string predicate_source;
        std::shared_ptr<const SeqRule> over;
    };

    explicit SeqRule(std::variant<Constant, List, ExprRule, Override> kind) : kind_(std::move(kind)) {}

    std::variant<Constant, List, ExprRule, Override> kind_;
};

} // namespace nifs::seq
