#include "shapeopt/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

namespace shapeopt {

namespace {

constexpr std::array<std::string_view, kVarCount> kVarNames{"x1", "x2", "u", "ux", "uy", "n1", "n2"};

enum class Func : std::uint8_t { sin, cos, exp, sqrt, abs };
constexpr std::array<std::string_view, 5> kFuncNames{"sin", "cos", "exp", "sqrt", "abs"};

constexpr std::size_t kMaxLength = 4096;
constexpr int kMaxDepth = 64;

std::optional<Func> func_from_name(std::string_view name)
{
    for (std::size_t i = 0; i < kFuncNames.size(); ++i)
        if (kFuncNames[i] == name)
            return static_cast<Func>(i);
    return std::nullopt;
}

} // namespace

struct Expr::Node {
    enum class Kind : std::uint8_t { Number, Variable, Negate, Binary, Call };

    Kind kind = Kind::Number;
    double value = 0.0;
    Var var = Var::x1;
    Func func = Func::sin;
    char op = '+';
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

double checked(double v)
{
    if (!std::isfinite(v))
        throw Error(Errc::NonFiniteResult, "expression evaluated to a non-finite value");
    return v;
}

double evaluate(const Expr::Node& n, const Bindings& b)
{
    switch (n.kind) {
    case Kind::Number:
        return n.value;
    case Kind::Variable:
        return b.get(n.var);
    case Kind::Negate:
        return -evaluate(*n.lhs, b);
    case Kind::Binary: {
        const double l = evaluate(*n.lhs, b);
        const double r = evaluate(*n.rhs, b);
        switch (n.op) {
        case '+': return checked(l + r);
        case '-': return checked(l - r);
        case '*': return checked(l * r);
        default: return checked(l / r);
        }
    }
    case Kind::Call: {
        const double a = evaluate(*n.lhs, b);
        switch (n.func) {
        case Func::sin: return checked(std::sin(a));
        case Func::cos: return checked(std::cos(a));
        case Func::exp: return checked(std::exp(a));
        case Func::sqrt: return checked(std::sqrt(a));
        case Func::abs: return std::abs(a);
        }
    }
    }
    return 0.0;
}

int node_depth(const Expr::Node& n)
{
    int d = 0;
    if (n.lhs)
        d = std::max(d, node_depth(*n.lhs));
    if (n.rhs)
        d = std::max(d, node_depth(*n.rhs));
    return d + 1;
}

void print(const Expr::Node& n, std::string& out)
{
    switch (n.kind) {
    case Kind::Number: {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, n.value);
        out.append(buf, res.ptr);
        break;
    }
    case Kind::Variable:
        out += kVarNames[static_cast<std::size_t>(n.var)];
        break;
    case Kind::Negate:
        out += "(-";
        print(*n.lhs, out);
        out += ')';
        break;
    case Kind::Binary:
        out += '(';
        print(*n.lhs, out);
        out += ' ';
        out += n.op;
        out += ' ';
        print(*n.rhs, out);
        out += ')';
        break;
    case Kind::Call:
        out += kFuncNames[static_cast<std::size_t>(n.func)];
        out += '(';
        print(*n.lhs, out);
        out += ')';
        break;
    }
}

void collect_vars(const Expr::Node& n, VarSet& vars)
{
    if (n.kind == Kind::Variable)
        vars.add(n.var);
    if (n.lhs)
        collect_vars(*n.lhs, vars);
    if (n.rhs)
        collect_vars(*n.rhs, vars);
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse()
    {
        NodePtr root = expr();
        skip_space();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ExprSyntaxError(pos_ + 1, message); }

    void skip_space()
    {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }

    static NodePtr binary(char op, NodePtr l, NodePtr r)
    {
        auto n = std::make_shared<Expr::Node>();
        n->kind = Kind::Binary;
        n->op = op;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : parser(p)
        {
            if (++parser.depth_ > kMaxDepth)
                parser.fail("expression nested deeper than 64 levels");
        }
        ~DepthGuard() { --parser.depth_; }
        Parser& parser;
    };

    NodePtr expr()
    {
        DepthGuard guard(*this);
        NodePtr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = binary('+', lhs, term());
            else if (accept('-'))
                lhs = binary('-', lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term()
    {
        NodePtr lhs = factor();
        for (;;) {
            if (accept('*'))
                lhs = binary('*', lhs, factor());
            else if (accept('/'))
                lhs = binary('/', lhs, factor());
            else
                return lhs;
        }
    }

    NodePtr factor()
    {
        DepthGuard guard(*this);
        skip_space();
        if (pos_ >= text_.size())
            fail("unexpected end of input");

        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            expect(')');
            return inner;
        }
        if (c == '-') {
            ++pos_;
            auto n = std::make_shared<Expr::Node>();
            n->kind = Kind::Negate;
            n->lhs = factor();
            return n;
        }
        if ((c >= '0' && c <= '9') || c == '.')
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9')
                ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
                ++pos_;
            if (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9')
                digits();
            else
                pos_ = save;
        }
        double value = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || !std::isfinite(value)) {
            pos_ = start;
            fail("malformed number");
        }
        auto n = std::make_shared<Expr::Node>();
        n->value = value;
        return n;
    }

    NodePtr identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);

        if (auto f = func_from_name(name)) {
            expect('(');
            auto n = std::make_shared<Expr::Node>();
            n->kind = Kind::Call;
            n->func = *f;
            n->lhs = expr();
            expect(')');
            return n;
        }
        if (auto v = var_from_name(name)) {
            auto n = std::make_shared<Expr::Node>();
            n->kind = Kind::Variable;
            n->var = *v;
            return n;
        }
        throw Error(Errc::UnknownIdentifier,
                    "unknown identifier '" + std::string(name) + "' at offset " + std::to_string(start + 1));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

} // namespace

std::string_view var_name(Var v) noexcept { return kVarNames[static_cast<std::size_t>(v)]; }

std::optional<Var> var_from_name(std::string_view name) noexcept
{
    for (std::size_t i = 0; i < kVarNames.size(); ++i)
        if (kVarNames[i] == name)
            return static_cast<Var>(i);
    return std::nullopt;
}

std::string VarSet::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < kVarCount; ++i) {
        if (!has(static_cast<Var>(i)))
            continue;
        if (!out.empty())
            out += ", ";
        out += kVarNames[i];
    }
    return "{" + out + "}";
}

Expr::Expr() : root_(std::make_shared<Node>()) {}
Expr::Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) { collect_vars(*root_, free_); }
Expr::~Expr() = default;
Expr::Expr(const Expr&) = default;
Expr& Expr::operator=(const Expr&) = default;
Expr::Expr(Expr&&) noexcept = default;
Expr& Expr::operator=(Expr&&) noexcept = default;

int Expr::depth() const { return node_depth(*root_); }

std::string Expr::to_string() const
{
    std::string out;
    print(*root_, out);
    return out;
}

double Expr::eval(const Bindings& bindings) const
{
    if (!free_.subset_of(bindings.bound()))
        throw Error(Errc::MissingBinding, "expression needs " + free_.to_string() + " but only " +
                                              bindings.bound().to_string() + " are bound");
    return checked(evaluate(*root_, bindings));
}

Expr parse_expr(std::string_view text)
{
    if (text.empty())
        throw ExprSyntaxError(1, "empty expression");
    if (text.size() > kMaxLength)
        throw ExprSyntaxError(kMaxLength + 1, "expression longer than 4096 characters");
    return Expr(Parser(text).parse());
}

Expr parse_expr(std::string_view text, VarSet allowed)
{
    Expr e = parse_expr(text);
    if (!e.free_variables().subset_of(allowed))
        throw Error(Errc::UnknownIdentifier, "expression '" + std::string(text) + "' uses variables " +
                                                 e.free_variables().to_string() + " outside " + allowed.to_string());
    return e;
}

CoefficientField CoefficientField::identity() { return from_strings("1", "0", "1"); }

CoefficientField CoefficientField::from_strings(std::string_view a11, std::string_view a12, std::string_view a22,
                                                std::optional<std::string_view> c0, double ellipticity_floor)
{
    CoefficientField f;
    f.a11 = parse_expr(a11, kSpatialVars);
    f.a12 = parse_expr(a12, kSpatialVars);
    f.a22 = parse_expr(a22, kSpatialVars);
    if (c0)
        f.c0 = parse_expr(*c0, kSpatialVars);
    if (!(ellipticity_floor > 0.0))
        throw Error(Errc::InvalidArgument, "ellipticity floor must be positive");
    f.ellipticity_floor = ellipticity_floor;
    return f;
}

bool CoefficientField::is_constant() const
{
    return a11.is_constant() && a12.is_constant() && a22.is_constant() && (!c0 || c0->is_constant());
}

CoefficientField::Sample CoefficientField::at(Vec2 x) const
{
    const Bindings b{{Var::x1, x.x}, {Var::x2, x.y}};
    return {a11.eval(b), a12.eval(b), a22.eval(b), c0 ? c0->eval(b) : 0.0};
}

void CoefficientField::check_ellipticity(Vec2 lower, Vec2 upper, int grid) const
{
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const Vec2 x{lower.x + (upper.x - lower.x) * i / (grid - 1),
                         lower.y + (upper.y - lower.y) * j / (grid - 1)};
            const Sample s = at(x);
            const double mean = 0.5 * (s.a11 + s.a22);
            const double radius = std::hypot(0.5 * (s.a11 - s.a22), s.a12);
            if (mean - radius < ellipticity_floor)
                throw Error(Errc::EllipticityViolation,
                            "coefficient matrix not uniformly elliptic at (" + std::to_string(x.x) + ", " +
                                std::to_string(x.y) + ")");
            if (s.c0 < 0.0)
                throw Error(Errc::EllipticityViolation, "zero-order coefficient is negative");
        }
    }
}

} // namespace shapeopt
