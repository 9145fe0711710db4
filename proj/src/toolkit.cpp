#include "nullcurve/toolkit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nullcurve/errors.hpp"

namespace nullcurve {

using nlohmann::json;

namespace {

PuncturedDomain domain_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    std::vector<GaussQ> punctures;
    if (j.contains("punctures"))
        for (const auto& p : j.at("punctures")) {
            if (!p.is_array() || p.size() != 2)
                throw ParseError("puncture must be a [re, im] pair of rational strings");
            punctures.emplace_back(parse_rational(p[0].get<std::string>()),
                                   parse_rational(p[1].get<std::string>()));
        }
    std::string label = j.value("label", "");
    if (kind == "punctured-plane")
        return make_domain(std::move(punctures), DomainKind::punctured_plane, 0, 0, label);
    if (kind == "annulus") {
        mpq_class ri = parse_rational(j.at("r_inner").get<std::string>());
        mpq_class ro = parse_rational(j.at("r_outer").get<std::string>());
        return make_domain({}, DomainKind::annulus, ri, ro, label);
    }
    throw ParseError("unknown domain kind '" + kind + "'");
}

} // namespace

std::string domain_to_json(const PuncturedDomain& domain) {
    json j;
    j["kind"] = domain.kind == DomainKind::annulus ? "annulus" : "punctured-plane";
    j["label"] = domain.label;
    json ps = json::array();
    for (const auto& p : domain.punctures)
        ps.push_back({rational_str(p.re), rational_str(p.im)});
    j["punctures"] = ps;
    if (domain.kind == DomainKind::annulus) {
        j["r_inner"] = rational_str(domain.r_inner);
        j["r_outer"] = rational_str(domain.r_outer);
    }
    return j.dump();
}

PuncturedDomain domain_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("domain JSON: ") + e.what());
    }
    return domain_from_json(j);
}

std::vector<CatalogEntry> load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open catalog '" + path + "'");
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(std::string("catalog: ") + e.what());
    }
    if (!root.contains("schema") || root["schema"].get<int>() != 1)
        throw ParseError("catalog: missing or unsupported schema version");

    std::vector<CatalogEntry> entries;
    for (const auto& je : root.at("entries")) {
        CatalogEntry e;
        try {
            e.name = je.at("name").get<std::string>();
            int n = je.value("n", 3);
            PuncturedDomain domain = domain_from_json(je.at("domain"));
            RationalMap g = parse_rational_map(je.at("g").get<std::string>());
            RationalMap eta = parse_rational_map(je.at("eta").get<std::string>());
            if (eta.is_zero()) throw ParseError("eta is the zero map");
            RationalMap theta = parse_rational_map(je.value("theta", "1"));
            if (n != 3) throw ParseError("catalog entries are n = 3 Weierstrass data");
            e.data = data_from_gw(g, eta, std::move(domain), e.name, std::move(theta));
            if (je.contains("loop_radius"))
                e.loop_radius = parse_rational(je.at("loop_radius").get<std::string>());
            const auto& exp = je.at("expected");
            e.expected_class_bits = exp.at("class_bits").get<std::vector<int>>();
            e.expected_source = exp.value("source", "computed");
            if (exp.contains("periods")) {
                std::vector<CVec> ps;
                for (const auto& row : exp.at("periods")) {
                    CVec v(row.size());
                    for (size_t j = 0; j < row.size(); ++j)
                        v(static_cast<Eigen::Index>(j)) =
                            Complex(row[j][0].get<double>(), row[j][1].get<double>());
                    ps.push_back(std::move(v));
                }
                e.expected_periods = std::move(ps);
            }
            if (exp.contains("flux")) {
                std::vector<Eigen::VectorXd> fs;
                for (const auto& row : exp.at("flux")) {
                    Eigen::VectorXd v(row.size());
                    for (size_t j = 0; j < row.size(); ++j)
                        v(static_cast<Eigen::Index>(j)) = row[j].get<double>();
                    fs.push_back(std::move(v));
                }
                e.expected_flux = std::move(fs);
            }
        } catch (const json::exception& ex) {
            throw ParseError("catalog entry '" + e.name + "': " + ex.what());
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

const CatalogEntry& find_entry(const std::vector<CatalogEntry>& catalog,
                               const std::string& name) {
    for (const auto& e : catalog)
        if (e.name == name) return e;
    throw Error("no catalog entry named '" + name + "'");
}

// ---------------------------------------------------------------------------
// OBJ export

namespace {

std::string fmt_coord(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace

void export_mesh(const SurfaceGrid& grid, std::ostream& out) {
    const int rows = grid.spec.rows(), cols = grid.spec.cols();
    Eigen::MatrixXd v = grid.real_part();
    if (v.cols() != 3) throw Error("export_mesh: grid must have values in R^3");
    for (Eigen::Index i = 0; i < v.rows(); ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            if (!std::isfinite(v(i, j)))
                throw NonFiniteVertex("vertex " + std::to_string(i));

    for (Eigen::Index i = 0; i < v.rows(); ++i)
        out << "v " << fmt_coord(v(i, 0)) << " " << fmt_coord(v(i, 1)) << " "
            << fmt_coord(v(i, 2)) << "\n";

    auto vid = [&](int i, int j) { return i * cols + (j % cols) + 1; };  // OBJ is 1-based
    const int jmax = grid.spec.wrap ? cols : cols - 1;
    for (int i = 0; i + 1 < rows; ++i) {
        for (int j = 0; j < jmax; ++j) {
            int a = vid(i, j), b = vid(i, j + 1), c = vid(i + 1, j + 1), d = vid(i + 1, j);
            out << "f " << a << " " << b << " " << c << "\n";
            out << "f " << a << " " << c << " " << d << "\n";
        }
    }
}

void export_mesh_file(const SurfaceGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    export_mesh(grid, out);
}

// ---------------------------------------------------------------------------
// minimality verification

VerificationReport verify_minimal(const SurfaceGrid& grid, double threshold_constant) {
    const int rows = grid.spec.rows(), cols = grid.spec.cols();
    if (rows < 3 || cols < 3) throw GridTooSmall();
    const double hx = grid.spec.dx(), hy = grid.spec.dy();
    Eigen::MatrixXd u = grid.real_part();
    const int n = static_cast<int>(u.cols());
    const bool wrap = grid.spec.wrap;

    auto at = [&](int i, int j) -> Eigen::VectorXd {
        int jj = wrap ? ((j % cols) + cols) % cols : j;
        return u.row(i * cols + jj).transpose();
    };

    VerificationReport rep;
    double scale = std::max(1.0, u.lpNorm<Eigen::Infinity>());
    const int j_lo = wrap ? 0 : 1;
    const int j_hi = wrap ? cols : cols - 1;
    for (int i = 1; i + 1 < rows; ++i) {
        for (int j = j_lo; j < j_hi; ++j) {
            Eigen::VectorXd c = at(i, j);
            Eigen::VectorXd lap = (at(i + 1, j) + at(i - 1, j) - 2 * c) / (hx * hx) +
                                  (at(i, j + 1) + at(i, j - 1) - 2 * c) / (hy * hy);
            Eigen::VectorXd ux = (at(i + 1, j) - at(i - 1, j)) / (2 * hx);
            Eigen::VectorXd uy = (at(i, j + 1) - at(i, j - 1)) / (2 * hy);
            double conf = std::abs(ux.squaredNorm() - uy.squaredNorm()) + std::abs(ux.dot(uy));
            Complex nullity(0, 0);
            for (int d = 0; d < n; ++d) {
                Complex w(ux(d), -uy(d));  // 2 du/dz per component
                nullity += w * w;
            }
            rep.laplacian_max = std::max(rep.laplacian_max, lap.lpNorm<Eigen::Infinity>());
            rep.conformality_max = std::max(rep.conformality_max, conf);
            rep.nullity_max = std::max(rep.nullity_max, std::abs(nullity));
        }
    }
    double h = std::max(hx, hy);
    rep.threshold = threshold_constant * h * h;
    // residuals are O(h^2); normalize by the value scale (linear for the
    // Laplacian, quadratic for the first-derivative quantities)
    rep.pass = rep.laplacian_max <= rep.threshold * scale &&
               rep.conformality_max <= rep.threshold * scale * scale &&
               rep.nullity_max <= rep.threshold * scale * scale;
    return rep;
}

} // namespace nullcurve
