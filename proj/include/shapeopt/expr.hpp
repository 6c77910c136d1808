#pragma once

#include "shapeopt/error.hpp"
#include "shapeopt/geometry.hpp"

#include <array>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace shapeopt {

/// Variables an expression may reference.
enum class Var : std::uint8_t { x1, x2, u, ux, uy, n1, n2 };
inline constexpr std::size_t kVarCount = 7;

std::string_view var_name(Var v) noexcept;
std::optional<Var> var_from_name(std::string_view name) noexcept;

/// Bit set of variables.
class VarSet {
public:
    constexpr VarSet() = default;
    constexpr VarSet(std::initializer_list<Var> vars)
    {
        for (Var v : vars)
            bits_ |= bit(v);
    }

    constexpr bool has(Var v) const { return (bits_ & bit(v)) != 0; }
    constexpr void add(Var v) { bits_ |= bit(v); }
    constexpr bool subset_of(VarSet other) const { return (bits_ & ~other.bits_) == 0; }
    constexpr bool empty() const { return bits_ == 0; }
    std::string to_string() const;

private:
    static constexpr std::uint8_t bit(Var v) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(v)); }
    std::uint8_t bits_ = 0;
};

/// SyntaxError carrying the 1-based character position where parsing failed.
class ExprSyntaxError : public Error {
public:
    ExprSyntaxError(std::size_t position, const std::string& message)
        : Error(Errc::SyntaxError, message + " at offset " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

inline constexpr VarSet kSpatialVars{Var::x1, Var::x2};
inline constexpr VarSet kIntegrandVars{Var::x1, Var::x2, Var::u, Var::ux, Var::uy};
inline constexpr VarSet kBoundaryVars{Var::x1, Var::x2, Var::n1, Var::n2};

/// Variable values for evaluation; unset slots are reported as MissingBinding.
class Bindings {
public:
    Bindings() = default;
    Bindings(std::initializer_list<std::pair<Var, double>> values)
    {
        for (auto [v, x] : values)
            set(v, x);
    }

    Bindings& set(Var v, double value)
    {
        values_[static_cast<std::size_t>(v)] = value;
        bound_.add(v);
        return *this;
    }
    double get(Var v) const { return values_[static_cast<std::size_t>(v)]; }
    VarSet bound() const { return bound_; }

private:
    std::array<double, kVarCount> values_{};
    VarSet bound_;
};

/// Parsed arithmetic expression. Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := NUMBER | IDENT | '(' expr ')' | '-' factor | FUNC '(' expr ')'
/// with FUNC one of sin, cos, exp, sqrt, abs.
class Expr {
public:
    struct Node;

    Expr();  // the constant 0
    ~Expr();
    Expr(const Expr&);
    Expr& operator=(const Expr&);
    Expr(Expr&&) noexcept;
    Expr& operator=(Expr&&) noexcept;

    VarSet free_variables() const { return free_; }
    int depth() const;
    /// Fully parenthesized canonical text; parsing it yields an equal tree.
    std::string to_string() const;
    bool is_constant() const { return free_.empty(); }

    /// Throws MissingBinding when a free variable is unbound and
    /// NonFiniteResult on inf/nan.
    double eval(const Bindings& bindings) const;

    friend Expr parse_expr(std::string_view text);

private:
    explicit Expr(std::shared_ptr<const Node> root);

    std::shared_ptr<const Node> root_;
    VarSet free_;
};

Expr parse_expr(std::string_view text);

/// Parses and checks that the free variables are allowed.
Expr parse_expr(std::string_view text, VarSet allowed);

inline double eval_expr(const Expr& e, const Bindings& bindings) { return e.eval(bindings); }

/// Symmetric coefficient matrix [[a11, a12], [a12, a22]] plus optional c0.
struct CoefficientField {
    Expr a11;
    Expr a12;
    Expr a22;
    std::optional<Expr> c0;
    double ellipticity_floor = 1e-8;

    /// -Laplacian.
    static CoefficientField identity();
    static CoefficientField from_strings(std::string_view a11, std::string_view a12, std::string_view a22,
                                         std::optional<std::string_view> c0 = std::nullopt,
                                         double ellipticity_floor = 1e-8);

    bool is_constant() const;

    struct Sample {
        double a11, a12, a22, c0;
    };
    Sample at(Vec2 x) const;

    /// Grid spot check of ellipticity and c0 >= 0 over [lower, upper];
    /// throws EllipticityViolation.
    void check_ellipticity(Vec2 lower, Vec2 upper, int grid = 32) const;
};

} // namespace shapeopt
