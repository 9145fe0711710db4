#include "nullcurve/gaussian_rational.hpp"

#include "nullcurve/errors.hpp"

namespace nullcurve {

GaussQ operator/(const GaussQ& a, const GaussQ& b) {
    mpq_class n = b.norm();
    if (n == 0) throw Error("GaussQ: division by zero");
    GaussQ c = a * b.conj();
    return GaussQ(c.re / n, c.im / n);
}

GaussQ GaussQ::inverse() const {
    return GaussQ(1) / *this;
}

std::string GaussQ::str() const {
    if (im == 0) return rational_str(re);
    std::string ims = rational_str(im) + "i";
    if (re == 0) return ims;
    if (im > 0) return rational_str(re) + "+" + ims;
    return rational_str(re) + ims;  // sign carried by im
}

std::string rational_str(const mpq_class& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class parse_rational(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw ParseError("bad rational: '" + s + "'");
    q.canonicalize();
    return q;
}

mpq_class rational_sqrt_lower(const mpq_class& q, unsigned bits) {
    if (q < 0) throw Error("rational_sqrt_lower: negative argument");
    if (q == 0) return 0;
    // floor(sqrt(num * 4^bits / den)) / 2^bits
    mpz_class num = q.get_num(), den = q.get_den();
    mpz_class scaled = (num << (2 * bits)) / den;
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    mpq_class r(root, mpz_class(1) << bits);
    r.canonicalize();
    return r;
}

} // namespace nullcurve
