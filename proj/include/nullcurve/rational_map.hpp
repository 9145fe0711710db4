#pragma once

#include <optional>

#include "nullcurve/polynomial.hpp"

namespace nullcurve {

/// Rational function of one complex variable over Q(i), kept in reduced form:
/// gcd(num, den) = 1 and den monic. Removable singularities cancel exactly.
class RationalMap {
public:
    RationalMap() : num_(), den_(GaussQ(1)) {}
    explicit RationalMap(GaussQ c) : num_(std::move(c)), den_(GaussQ(1)) { num_.trim(); }
    RationalMap(Polynomial num, Polynomial den);

    static RationalMap variable() { return RationalMap(Polynomial::variable(), Polynomial(GaussQ(1))); }
    static RationalMap constant(GaussQ c) { return RationalMap(std::move(c)); }
    static RationalMap one() { return constant(GaussQ(1)); }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

    RationalMap derivative() const;
    RationalMap pow(long k) const;

    /// Evaluate at a complex point; throws PoleAtSample near a denominator zero.
    Complex eval(Complex z) const;
    bool is_pole(Complex z, double tol = 1e-12) const;

    /// Exact evaluation; throws PoleAtSample if den vanishes at x.
    GaussQ eval_exact(const GaussQ& x) const;
    bool has_exact_pole(const GaussQ& x) const { return den_.eval_exact(x).is_zero(); }

    friend RationalMap operator+(const RationalMap& a, const RationalMap& b);
    friend RationalMap operator-(const RationalMap& a, const RationalMap& b);
    friend RationalMap operator-(const RationalMap& a);
    friend RationalMap operator*(const RationalMap& a, const RationalMap& b);
    friend RationalMap operator/(const RationalMap& a, const RationalMap& b);
    friend bool operator==(const RationalMap& a, const RationalMap& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    std::string str(const std::string& var = "z") const;

private:
    void reduce();
    Polynomial num_, den_;
};

/// Parse expressions like "(1-z^2)/z^2", "i*(z-1)^2/z^4", "1-1/z^4" over Q(i).
/// Grammar: + - * / ^ with integer (possibly negative) exponents, atoms z, i,
/// integers, parentheses.
RationalMap parse_rational_map(const std::string& text);

/// Denominator coefficients lifted to doubles once for fast repeated evaluation.
struct CompiledRational {
    std::vector<Complex> num, den;
    CompiledRational() = default;
    explicit CompiledRational(const RationalMap& r);
    Complex eval(Complex z) const;
    Complex den_at(Complex z) const;
};

} // namespace nullcurve
