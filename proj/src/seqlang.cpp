#include "nifs/seqlang.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace nifs::seq {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
    Tok kind = Tok::end;
    std::size_t offset = 0;
    std::string_view text;
    double value = 0.0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        Token t;
        t.offset = pos_;
        if (pos_ >= src_.size())
            return t;
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number(t);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
                ++end;
            t.kind = Tok::ident;
            t.text = src_.substr(pos_, end - pos_);
            pos_ = end;
            return t;
        }
        ++pos_;
        t.text = src_.substr(t.offset, 1);
        switch (c) {
        case '+': t.kind = Tok::plus; return t;
        case '-': t.kind = Tok::minus; return t;
        case '*': t.kind = Tok::star; return t;
        case '/': t.kind = Tok::slash; return t;
        case '^': t.kind = Tok::caret; return t;
        case '(': t.kind = Tok::lparen; return t;
        case ')': t.kind = Tok::rparen; return t;
        case ',': t.kind = Tok::comma; return t;
        default:
            throw SyntaxError(std::string("unexpected character '") + c + "' at offset " + std::to_string(t.offset),
                              t.offset, {"number", "j", "function", "("});
        }
    }

private:
    Token number(Token t)
    {
        std::size_t end = pos_;
        const auto digits = [&] {
            std::size_t n = 0;
            while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) {
                ++end;
                ++n;
            }
            return n;
        };
        std::size_t n = digits();
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            n += digits();
        }
        if (n == 0)
            throw SyntaxError("malformed number at offset " + std::to_string(t.offset), t.offset, {"digit"});
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t save = end++;
            if (end < src_.size() && (src_[end] == '+' || src_[end] == '-'))
                ++end;
            if (digits() == 0)
                end = save;
        }
        t.kind = Tok::number;
        t.text = src_.substr(pos_, end - pos_);
        const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
        if (res.ec != std::errc{} || res.ptr != t.text.data() + t.text.size() || !std::isfinite(t.value))
            throw SyntaxError("number out of range at offset " + std::to_string(t.offset), t.offset, {"number"});
        pos_ = end;
        return t;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

ExprPtr make(auto node) { return std::make_shared<const Expr>(Expr{std::move(node)}); }

std::string describe(const Token& t)
{
    return t.kind == Tok::end ? std::string("end of input") : "'" + std::string(t.text) + "'";
}

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { advance(); }

    ExprPtr parse_all()
    {
        ExprPtr e = expr();
        if (cur_.kind != Tok::end)
            fail({"+", "-", "*", "/", "^", "end of input"});
        return e;
    }

private:
    void advance() { cur_ = lex_.next(); }

    [[noreturn]] void fail(std::vector<std::string> expected)
    {
        std::string msg = "unexpected " + describe(cur_) + " at offset " + std::to_string(cur_.offset) + "; expected ";
        for (std::size_t i = 0; i < expected.size(); ++i)
            msg += (i ? ", " : "") + expected[i];
        throw SyntaxError(msg, cur_.offset, std::move(expected));
    }

    void expect(Tok kind, const char* what)
    {
        if (cur_.kind != kind)
            fail({what});
        advance();
    }

    ExprPtr expr()
    {
        ExprPtr lhs = term();
        while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
            const char op = cur_.kind == Tok::plus ? '+' : '-';
            advance();
            lhs = make(Binary{op, lhs, term()});
        }
        return lhs;
    }

    ExprPtr term()
    {
        ExprPtr lhs = unary();
        while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
            const char op = cur_.kind == Tok::star ? '*' : '/';
            advance();
            lhs = make(Binary{op, lhs, unary()});
        }
        return lhs;
    }

    ExprPtr unary()
    {
        if (cur_.kind == Tok::minus) {
            advance();
            return make(Negate{unary()});
        }
        return power();
    }

    ExprPtr power()
    {
        ExprPtr base = atom();
        if (cur_.kind == Tok::caret) {
            advance();
            return make(Binary{'^', base, unary()});
        }
        return base;
    }

    ExprPtr atom()
    {
        switch (cur_.kind) {
        case Tok::number: {
            const double v = cur_.value;
            advance();
            return make(Number{v});
        }
        case Tok::lparen: {
            advance();
            ExprPtr e = expr();
            expect(Tok::rparen, ")");
            return e;
        }
        case Tok::ident:
            return identifier();
        default:
            fail({"number", "j", "function", "("});
        }
    }

    ExprPtr identifier()
    {
        const Token name = cur_;
        advance();
        if (name.text == "j" && cur_.kind != Tok::lparen)
            return make(Var{});
        const bool known = name.text == "min" || name.text == "max" || name.text == "pow";
        if (!known || cur_.kind != Tok::lparen)
            throw SyntaxError("unknown identifier '" + std::string(name.text) + "' at offset " +
                                  std::to_string(name.offset),
                              name.offset, {"j", "min(", "max(", "pow("});
        advance();
        std::vector<ExprPtr> args{expr()};
        while (cur_.kind == Tok::comma) {
            advance();
            args.push_back(expr());
        }
        expect(Tok::rparen, ")");
        if (args.size() != 2)
            throw SyntaxError(std::string(name.text) + " takes 2 arguments, got " + std::to_string(args.size()) +
                                  " at offset " + std::to_string(name.offset),
                              name.offset, {","});
        return make(Call{std::string(name.text), std::move(args)});
    }

    Lexer lex_;
    Token cur_;
};

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void arithmetic_error(const std::string& what, double j, const Expr& e)
{
    throw Error(ErrorKind::arithmetic, what + " at j=" + format_number(j) + " in " + print(e));
}

} // namespace

ExprPtr parse(std::string_view source)
{
    return Parser(source).parse_all();
}

std::string print(const Expr& e)
{
    return std::visit([](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>)
            return format_number(n.value);
        else if constexpr (std::is_same_v<T, Var>)
            return "j";
        else if constexpr (std::is_same_v<T, Negate>)
            return "(-" + print(*n.operand) + ")";
        else if constexpr (std::is_same_v<T, Binary>)
            return "(" + print(*n.lhs) + " " + n.op + " " + print(*n.rhs) + ")";
        else {
            std::string s = n.name + "(";
            for (std::size_t i = 0; i < n.args.size(); ++i)
                s += (i ? ", " : "") + print(*n.args[i]);
            return s + ")";
        }
    }, e.node);
}

bool structurally_equal(const Expr& a, const Expr& b)
{
    if (a.node.index() != b.node.index())
        return false;
    return std::visit([&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Number>)
            return x.value == y.value;
        else if constexpr (std::is_same_v<T, Var>)
            return true;
        else if constexpr (std::is_same_v<T, Negate>)
            return structurally_equal(*x.operand, *y.operand);
        else if constexpr (std::is_same_v<T, Binary>)
            return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) && structurally_equal(*x.rhs, *y.rhs);
        else {
            if (x.name != y.name || x.args.size() != y.args.size())
                return false;
            for (std::size_t i = 0; i < x.args.size(); ++i)
                if (!structurally_equal(*x.args[i], *y.args[i]))
                    return false;
            return true;
        }
    }, a.node);
}

double evaluate(const Expr& e, double j)
{
    const double v = std::visit([&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>)
            return n.value;
        else if constexpr (std::is_same_v<T, Var>)
            return j;
        else if constexpr (std::is_same_v<T, Negate>)
            return -evaluate(*n.operand, j);
        else if constexpr (std::is_same_v<T, Binary>) {
            const double x = evaluate(*n.lhs, j);
            const double y = evaluate(*n.rhs, j);
            switch (n.op) {
            case '+': return x + y;
            case '-': return x - y;
            case '*': return x * y;
            case '/':
                if (y == 0.0)
                    arithmetic_error("division by zero", j, e);
                return x / y;
            default: return std::pow(x, y);
            }
        } else {
            const double x = evaluate(*n.args[0], j);
            const double y = evaluate(*n.args[1], j);
            if (n.name == "min")
                return std::min(x, y);
            if (n.name == "max")
                return std::max(x, y);
            return std::pow(x, y);
        }
    }, e.node);
    if (!std::isfinite(v))
        arithmetic_error("non-finite result", j, e);
    return v;
}

SeqRule SeqRule::constant(double v)
{
    if (!std::isfinite(v))
        throw Error(ErrorKind::parameter, "constant rule needs a finite value");
    return SeqRule(Constant{v});
}

SeqRule SeqRule::list(std::vector<double> values, ListTail tail)
{
    if (values.empty())
        throw Error(ErrorKind::parameter, "list rule needs at least one value");
    for (double v : values)
        if (!std::isfinite(v))
            throw Error(ErrorKind::parameter, "list rule values must be finite");
    return SeqRule(List{std::move(values), tail});
}

SeqRule SeqRule::expr(std::string_view source)
{
    return SeqRule(ExprRule{parse(source), std::string(source)});
}

SeqRule SeqRule::with_override(SeqRule base, std::string_view predicate, SeqRule override_rule)
{
    return SeqRule(Override{std::make_shared<const SeqRule>(std::move(base)), parse(predicate), std::string(predicate),
                            std::make_shared<const SeqRule>(std::move(override_rule))});
}

double SeqRule::operator()(int j) const
{
    if (j < 1)
        throw Error(ErrorKind::parameter, "sequence index must be >= 1");
    return std::visit([&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Constant>)
            return k.value;
        else if constexpr (std::is_same_v<T, List>) {
            const auto n = k.values.size();
            if (static_cast<std::size_t>(j) <= n)
                return k.values[static_cast<std::size_t>(j - 1)];
            if (k.tail == ListTail::error)
                throw Error(ErrorKind::horizon, "list rule has no value at j=" + std::to_string(j));
            return k.values.back();
        } else if constexpr (std::is_same_v<T, ExprRule>)
            return evaluate(*k.expr, j);
        else
            return evaluate(*k.predicate, j) != 0.0 ? (*k.over)(j) : (*k.base)(j);
    }, kind_);
}

std::string SeqRule::describe() const
{
    return std::visit([](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Constant>)
            return format_number(k.value);
        else if constexpr (std::is_same_v<T, List>) {
            std::string s = "[";
            for (std::size_t i = 0; i < k.values.size(); ++i)
                s += (i ? "," : "") + format_number(k.values[i]);
            return s + (k.tail == ListTail::repeat_last ? "...]" : "]");
        } else if constexpr (std::is_same_v<T, ExprRule>)
            return k.source;
        else
            return "if(" + k.predicate_source + "){" + k.over->describe() + "}else{" + k.base->describe() + "}";
    }, kind_);
}

} // namespace nifs::seq
