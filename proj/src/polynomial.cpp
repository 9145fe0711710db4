#include "nullcurve/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <sstream>

#include "nullcurve/errors.hpp"

namespace nullcurve {

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<GaussQ> out(std::max(a.coeffs.size(), b.coeffs.size()));
    for (size_t i = 0; i < out.size(); ++i) {
        if (i < a.coeffs.size()) out[i] += a.coeffs[i];
        if (i < b.coeffs.size()) out[i] += b.coeffs[i];
    }
    return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<GaussQ> out(std::max(a.coeffs.size(), b.coeffs.size()));
    for (size_t i = 0; i < out.size(); ++i) {
        if (i < a.coeffs.size()) out[i] += a.coeffs[i];
        if (i < b.coeffs.size()) out[i] -= b.coeffs[i];
    }
    return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<GaussQ> out(a.coeffs.size() + b.coeffs.size() - 1);
    for (size_t i = 0; i < a.coeffs.size(); ++i)
        for (size_t j = 0; j < b.coeffs.size(); ++j)
            out[i + j] += a.coeffs[i] * b.coeffs[j];
    return Polynomial(std::move(out));
}

Polynomial operator*(const GaussQ& c, const Polynomial& p) {
    std::vector<GaussQ> out(p.coeffs.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = c * p.coeffs[i];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::monic() const {
    if (is_zero()) return *this;
    return leading().inverse() * *this;
}

Polynomial Polynomial::derivative() const {
    if (coeffs.size() <= 1) return Polynomial();
    std::vector<GaussQ> out(coeffs.size() - 1);
    for (size_t i = 1; i < coeffs.size(); ++i)
        out[i - 1] = GaussQ(static_cast<long>(i)) * coeffs[i];
    return Polynomial(std::move(out));
}

GaussQ Polynomial::eval_exact(const GaussQ& x) const {
    GaussQ acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Complex Polynomial::eval(Complex x) const {
    Complex acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * x + it->to_complex();
    return acc;
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw Error("divmod: zero divisor");
    Polynomial r = a;
    std::vector<GaussQ> q;
    if (a.degree() >= b.degree()) q.resize(a.degree() - b.degree() + 1);
    GaussQ lead_inv = b.leading().inverse();
    while (!r.is_zero() && r.degree() >= b.degree()) {
        int shift = r.degree() - b.degree();
        GaussQ factor = r.leading() * lead_inv;
        q[shift] = factor;
        for (size_t i = 0; i < b.coeffs.size(); ++i)
            r.coeffs[shift + i] -= factor * b.coeffs[i];
        r.trim();
    }
    return {Polynomial(std::move(q)), std::move(r)};
}

Polynomial poly_gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
        Polynomial r = divmod(a, b).second;
        a = std::move(b);
        b = r.is_zero() ? r : r.monic();  // keep coefficient growth under control
    }
    return a.is_zero() ? a : a.monic();
}

std::pair<int, Polynomial> strip_root(const Polynomial& p, const GaussQ& root) {
    Polynomial factor(std::vector<GaussQ>{-root, GaussQ(1)});
    Polynomial cur = p;
    int mult = 0;
    while (!cur.is_zero()) {
        auto [q, r] = divmod(cur, factor);
        if (!r.is_zero()) break;
        cur = std::move(q);
        ++mult;
    }
    return {mult, cur};
}

std::vector<Complex> numeric_roots(const Polynomial& p) {
    int d = p.degree();
    if (d < 1) throw Error("numeric_roots: degree must be >= 1");
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    Complex lead = p.coeffs.back().to_complex();
    for (int i = 0; i < d; ++i) {
        companion(i, d - 1) = -p.coeffs[i].to_complex() / lead;
        if (i > 0) companion(i, i - 1) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    std::vector<Complex> roots(d);
    for (int i = 0; i < d; ++i) roots[i] = es.eigenvalues()(i);
    return roots;
}

std::string Polynomial::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const GaussQ& c = coeffs[k];
        if (c.is_zero()) continue;
        std::string cs = c.str();
        bool needs_parens = cs.find('+') != std::string::npos ||
                            (cs.find('-', 1) != std::string::npos);
        if (!first) out << (cs[0] == '-' && !needs_parens ? " - " : " + ");
        if (!first && cs[0] == '-' && !needs_parens) cs = cs.substr(1);
        first = false;
        if (k == 0) {
            out << (needs_parens ? "(" + cs + ")" : cs);
            continue;
        }
        if (cs == "1") {
        } else if (cs == "-1") {
            out << "-";
        } else {
            out << (needs_parens ? "(" + cs + ")" : cs) << "*";
        }
        out << var;
        if (k > 1) out << "^" << k;
    }
    return out.str();
}

} // namespace nullcurve
