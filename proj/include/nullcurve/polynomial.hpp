#pragma once

#include <vector>

#include "nullcurve/gaussian_rational.hpp"

namespace nullcurve {

/// Univariate polynomial over Q(i), dense coefficients, index = power.
struct Polynomial {
    std::vector<GaussQ> coeffs;  // trailing zeros trimmed; empty = zero polynomial

    Polynomial() = default;
    explicit Polynomial(GaussQ c) { coeffs.push_back(std::move(c)); trim(); }
    explicit Polynomial(std::vector<GaussQ> cs) : coeffs(std::move(cs)) { trim(); }

    static Polynomial variable() {
        return Polynomial(std::vector<GaussQ>{GaussQ(0), GaussQ(1)});
    }

    void trim() {
        while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    }

    bool is_zero() const { return coeffs.empty(); }
    bool is_constant() const { return coeffs.size() <= 1; }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }  // -1 for zero

    const GaussQ& leading() const { return coeffs.back(); }
    GaussQ constant_term() const { return coeffs.empty() ? GaussQ(0) : coeffs.front(); }

    Polynomial monic() const;
    Polynomial derivative() const;

    GaussQ eval_exact(const GaussQ& x) const;
    Complex eval(Complex x) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const GaussQ& c, const Polynomial& p);
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.coeffs == b.coeffs;
    }

    std::string str(const std::string& var = "z") const;
};

/// Euclidean division: a = q*b + r with deg r < deg b.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);

/// Monic gcd over the field Q(i).
Polynomial poly_gcd(Polynomial a, Polynomial b);

/// Exact removal of the factor (x - root): returns multiplicity and the quotient.
std::pair<int, Polynomial> strip_root(const Polynomial& p, const GaussQ& root);

/// All roots, numerically (companion-matrix eigenvalues). Degree >= 1 required.
std::vector<Complex> numeric_roots(const Polynomial& p);

} // namespace nullcurve
