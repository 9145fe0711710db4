#include "nullcurve/rational_map.hpp"

#include <cctype>

#include "nullcurve/errors.hpp"

namespace nullcurve {

RationalMap::RationalMap(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error("RationalMap: zero denominator");
    reduce();
}

void RationalMap::reduce() {
    if (num_.is_zero()) {
        den_ = Polynomial(GaussQ(1));
        return;
    }
    Polynomial g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = divmod(num_, g).first;
        den_ = divmod(den_, g).first;
    }
    GaussQ lead_inv = den_.leading().inverse();
    num_ = lead_inv * num_;
    den_ = lead_inv * den_;
}

RationalMap RationalMap::derivative() const {
    // (n/d)' = (n'd - nd')/d^2; reduction cancels the common part
    return RationalMap(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RationalMap RationalMap::pow(long k) const {
    if (k < 0) {
        if (is_zero()) throw Error("RationalMap: 0^negative");
        return RationalMap(den_, num_).pow(-k);
    }
    RationalMap acc = one();
    RationalMap base = *this;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

Complex RationalMap::eval(Complex z) const {
    Complex d = den_.eval(z);
    Complex n = num_.eval(z);
    double scale = 0.0;
    for (const auto& c : den_.coeffs) scale = std::max(scale, std::abs(c.to_complex()));
    double zm = std::max(1.0, std::abs(z));
    double zp = 1.0;
    for (int i = 0; i < den_.degree(); ++i) zp *= zm;
    if (std::abs(d) < 1e-14 * scale * zp) throw PoleAtSample("pole near sample point");
    return n / d;
}

bool RationalMap::is_pole(Complex z, double tol) const {
    Complex d = den_.eval(z);
    double scale = 0.0;
    for (const auto& c : den_.coeffs) scale = std::max(scale, std::abs(c.to_complex()));
    return std::abs(d) < tol * std::max(scale, 1e-300);
}

GaussQ RationalMap::eval_exact(const GaussQ& x) const {
    GaussQ d = den_.eval_exact(x);
    if (d.is_zero()) throw PoleAtSample("exact pole at sample point");
    return num_.eval_exact(x) / d;
}

RationalMap operator+(const RationalMap& a, const RationalMap& b) {
    return RationalMap(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
RationalMap operator-(const RationalMap& a, const RationalMap& b) {
    return RationalMap(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}
RationalMap operator-(const RationalMap& a) {
    return RationalMap(GaussQ(-1) * a.num_, a.den_);
}
RationalMap operator*(const RationalMap& a, const RationalMap& b) {
    return RationalMap(a.num_ * b.num_, a.den_ * b.den_);
}
RationalMap operator/(const RationalMap& a, const RationalMap& b) {
    if (b.is_zero()) throw Error("RationalMap: division by zero map");
    return RationalMap(a.num_ * b.den_, a.den_ * b.num_);
}

std::string RationalMap::str(const std::string& var) const {
    if (den_ == Polynomial(GaussQ(1))) return num_.str(var);
    std::string n = num_.str(var), d = den_.str(var);
    return "(" + n + ")/(" + d + ")";
}

// ---------------------------------------------------------------------------
// expression parser

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    bool accept(char c) {
        if (peek(c)) { ++pos; return true; }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("rational map parse error at position " + std::to_string(pos) +
                         ": " + what + " in '" + s + "'");
    }

    RationalMap parse_expr() {
        RationalMap acc = parse_term();
        for (;;) {
            if (accept('+')) acc = acc + parse_term();
            else if (accept('-')) acc = acc - parse_term();
            else return acc;
        }
    }

    RationalMap parse_term() {
        RationalMap acc = parse_factor();
        for (;;) {
            if (accept('*')) acc = acc * parse_factor();
            else if (accept('/')) acc = acc / parse_factor();
            else return acc;
        }
    }

    RationalMap parse_factor() {
        if (accept('-')) return -parse_factor();
        if (accept('+')) return parse_factor();
        RationalMap base = parse_atom();
        if (accept('^')) {
            long expnt = parse_int();
            return base.pow(expnt);
        }
        return base;
    }

    long parse_int() {
        skip_ws();
        bool neg = false;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) neg = (s[pos++] == '-');
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            fail("expected integer exponent");
        long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            v = v * 10 + (s[pos++] - '0');
        return neg ? -v : v;
    }

    RationalMap parse_atom() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            RationalMap inner = parse_expr();
            if (!accept(')')) fail("missing ')'");
            return inner;
        }
        if (c == 'z' || c == 'Z') { ++pos; return RationalMap::variable(); }
        if (c == 'i' || c == 'I') { ++pos; return RationalMap::constant(GaussQ::unit_i()); }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                digits.push_back(s[pos++]);
            return RationalMap::constant(GaussQ(mpq_class(digits)));
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

} // namespace

RationalMap parse_rational_map(const std::string& text) {
    Parser p(text);
    RationalMap r = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return r;
}

CompiledRational::CompiledRational(const RationalMap& r) {
    num.reserve(r.num().coeffs.size());
    for (const auto& c : r.num().coeffs) num.push_back(c.to_complex());
    den.reserve(r.den().coeffs.size());
    for (const auto& c : r.den().coeffs) den.push_back(c.to_complex());
    if (num.empty()) num.push_back(Complex(0));
}

Complex CompiledRational::eval(Complex z) const {
    Complex n(0), d(0);
    for (auto it = num.rbegin(); it != num.rend(); ++it) n = n * z + *it;
    for (auto it = den.rbegin(); it != den.rend(); ++it) d = d * z + *it;
    return n / d;
}

Complex CompiledRational::den_at(Complex z) const {
    Complex d(0);
    for (auto it = den.rbegin(); it != den.rend(); ++it) d = d * z + *it;
    return d;
}

} // namespace nullcurve
