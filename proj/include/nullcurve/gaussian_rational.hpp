#pragma once

#include <complex>
#include <string>

#include <gmpxx.h>

namespace nullcurve {

using Complex = std::complex<double>;

/// Exact element of Q(i): re + im*i with rational components.
struct GaussQ {
    mpq_class re, im;

    GaussQ() : re(0), im(0) {}
    GaussQ(long r) : re(r), im(0) {}
    GaussQ(const mpq_class& r) : re(r), im(0) {}
    GaussQ(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {
        re.canonicalize();
        im.canonicalize();
    }

    static GaussQ unit_i() { return GaussQ(mpq_class(0), mpq_class(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussQ conj() const { return GaussQ(re, -im); }

    // |z|^2 as an exact rational
    mpq_class norm() const { return re * re + im * im; }

    Complex to_complex() const { return Complex(re.get_d(), im.get_d()); }

    friend GaussQ operator+(const GaussQ& a, const GaussQ& b) {
        return GaussQ(a.re + b.re, a.im + b.im);
    }
    friend GaussQ operator-(const GaussQ& a, const GaussQ& b) {
        return GaussQ(a.re - b.re, a.im - b.im);
    }
    friend GaussQ operator-(const GaussQ& a) { return GaussQ(-a.re, -a.im); }
    friend GaussQ operator*(const GaussQ& a, const GaussQ& b) {
        return GaussQ(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend GaussQ operator/(const GaussQ& a, const GaussQ& b);

    GaussQ& operator+=(const GaussQ& b) { return *this = *this + b; }
    GaussQ& operator-=(const GaussQ& b) { return *this = *this - b; }
    GaussQ& operator*=(const GaussQ& b) { return *this = *this * b; }
    GaussQ& operator/=(const GaussQ& b) { return *this = *this / b; }

    friend bool operator==(const GaussQ& a, const GaussQ& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussQ& a, const GaussQ& b) { return !(a == b); }

    GaussQ inverse() const;
    std::string str() const;
};

/// Parse "p/q" (or "p") into an exact rational.
mpq_class parse_rational(const std::string& s);

/// Largest dyadic rational r with r*r <= q; exact lower bound for sqrt(q).
/// q must be nonnegative. `bits` controls the 2^-bits resolution.
mpq_class rational_sqrt_lower(const mpq_class& q, unsigned bits = 24);

std::string rational_str(const mpq_class& q);

} // namespace nullcurve
