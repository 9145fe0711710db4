// Python bindings for the main operations: quadric geometry, Weierstrass
// data, classification, periods/flux, path deformation, and the spray
// correction to exact null curves.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nullcurve/convexint.hpp"
#include "nullcurve/errors.hpp"
#include "nullcurve/spray.hpp"
#include "nullcurve/toolkit.hpp"

namespace py = pybind11;
using namespace nullcurve;

namespace {

WeierstrassData data_from_strings(const std::string& g, const std::string& eta,
                                  const std::vector<std::pair<std::string, std::string>>& punctures,
                                  const std::string& theta) {
    std::vector<GaussQ> ps;
    for (const auto& [re, im] : punctures) ps.emplace_back(parse_rational(re), parse_rational(im));
    return data_from_gw(parse_rational_map(g), parse_rational_map(eta),
                        make_domain(std::move(ps)), "", parse_rational_map(theta));
}

std::vector<BasisLoop> basis_for(const WeierstrassData& data, const std::string& radius) {
    std::optional<mpq_class> r;
    if (!radius.empty()) r = parse_rational(radius);
    return homology_basis(data.domain, {}, r);
}

py::dict correction_summary(const NullCorrection& corr, const WeierstrassData& data,
                            const std::vector<BasisLoop>& basis) {
    py::dict out;
    out["identity"] = corr.identity;
    out["final_period_norm"] = corr.final_period_norm;
    out["real_period_by_knot"] = corr.real_period_by_knot;
    out["period_by_knot"] = corr.period_by_knot;
    out["class_bits"] = corr.isotopy_class.bits;
    out["zeta_star"] = corr.zeta_star;
    // corrected samples on the first basis loop for downstream checks
    DiscretePath traced = sample_map_on_loop(corr.f1, data.n, basis.at(0), 256);
    out["corrected_loop_samples"] = CMat(traced.samples);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "null curves and conformal minimal immersions on punctured planar domains";

    py::register_exception<Error>(m, "NullcurveError");

    m.def("residual", [](const CVec& z) { return residual(z); },
          "sum of squares of the coordinates (the nullity defect)", py::arg("z"));

    m.def("spinor_project", &spinor_project,
          "the 2-to-1 cover (u, v) -> (u^2 - v^2, i(u^2 + v^2), 2uv)", py::arg("u"),
          py::arg("v"));

    m.def("retract", &retract, "Newton projection onto the null quadric", py::arg("z"),
          py::arg("tol") = 1e-12);

    m.def("tangent_frame", [](const CVec& z) { return CMat(tangent_frame(z)); },
          "orthonormal frame of the quadric tangent space, one row per vector", py::arg("z"));

    m.def(
        "spinor_monodromy",
        [](const CMat& samples) {
            DiscretePath path;
            path.samples = samples;
            path.closed = true;
            return spinor_monodromy(path);
        },
        "Z2 monodromy of a closed on-quadric path in C^3 (rows = samples)",
        py::arg("samples"));

    m.def(
        "is_nonflat",
        [](const CMat& samples, double tol) { return is_nonflat(samples, tol); },
        py::arg("samples"), py::arg("tol") = 1e-8);

    m.def(
        "from_gw",
        [](const std::string& g, const std::string& eta) {
            auto f = from_gw(parse_rational_map(g), parse_rational_map(eta));
            return std::vector<std::string>{f[0].str(), f[1].str(), f[2].str()};
        },
        "Osserman form ((1-g^2)eta, i(1+g^2)eta, 2 g eta) as reduced rational strings",
        py::arg("g"), py::arg("eta"));

    m.def(
        "classify",
        [](const std::string& g, const std::string& eta,
           const std::vector<std::pair<std::string, std::string>>& punctures,
           const std::string& loop_radius, int samples) {
            WeierstrassData data = data_from_strings(g, eta, punctures, "1");
            IsotopyClass cls = classify(data, basis_for(data, loop_radius), samples);
            return cls.bits;
        },
        "Z2 class bits of Weierstrass data, one per basis loop", py::arg("g"), py::arg("eta"),
        py::arg("punctures"), py::arg("loop_radius") = "", py::arg("samples") = 256);

    m.def(
        "periods",
        [](const std::string& g, const std::string& eta,
           const std::vector<std::pair<std::string, std::string>>& punctures,
           const std::string& theta, const std::string& loop_radius, int samples) {
            WeierstrassData data = data_from_strings(g, eta, punctures, theta);
            PeriodVector p = periods(data, basis_for(data, loop_radius), samples);
            return p.entries;
        },
        py::arg("g"), py::arg("eta"), py::arg("punctures"), py::arg("theta") = "1",
        py::arg("loop_radius") = "", py::arg("samples") = 512);

    m.def(
        "winding_number",
        [](const std::string& r, std::pair<std::string, std::string> center,
           const std::string& radius, int samples) {
            BasisLoop loop{GaussQ(parse_rational(center.first), parse_rational(center.second)),
                           parse_rational(radius)};
            return winding_number(parse_rational_map(r), loop, samples);
        },
        py::arg("r"), py::arg("center") = std::pair<std::string, std::string>{"0", "0"},
        py::arg("radius") = "1", py::arg("samples") = 512);

    m.def(
        "deform_flat_loop",
        [](const CVec& target, double epsilon, int input_samples) {
            PathFamily fam;
            fam.n = 3;
            DiscretePath loop;
            loop.samples.resize(input_samples + 1, 3);
            for (int k = 0; k <= input_samples; ++k) {
                Complex z = std::exp(Complex(0, 2 * M_PI * k / input_samples));
                loop.samples(k, 0) = z;
                loop.samples(k, 1) = z * Complex(0, 1);
                loop.samples(k, 2) = 0;
            }
            loop.samples.row(input_samples) = loop.samples.row(0);
            loop.closed = true;
            fam.paths.push_back(std::move(loop));
            TargetSchedule sched = TargetSchedule::linear(fam, {target});
            HomotopyOfPaths h = deform_paths(fam, sched, epsilon);
            py::dict out;
            out["max_integral_error"] = h.max_integral_error;
            out["max_quadric_residual"] = h.max_quadric_residual;
            out["snapshots"] = h.T + 1;
            out["final_integral"] = CVec(path_quadrature(h.snapshots[0][h.T]));
            return out;
        },
        "deform the flat circle loop toward a target integral",
        py::arg("target"), py::arg("epsilon") = 1e-3, py::arg("input_samples") = 2048);

    m.def(
        "correct_to_null",
        [](const std::string& g, const std::string& eta,
           const std::vector<std::pair<std::string, std::string>>& punctures, double epsilon,
           double tol, const std::string& loop_radius) {
            WeierstrassData data = data_from_strings(g, eta, punctures, "1");
            auto basis = basis_for(data, loop_radius);
            NullCorrection corr = correct_to_null(data, basis, epsilon, tol);
            return correction_summary(corr, data, basis);
        },
        "drive the periods of Weierstrass data to zero through quadric-preserving flows",
        py::arg("g"), py::arg("eta"), py::arg("punctures"), py::arg("epsilon") = 1e-3,
        py::arg("tol") = 1e-10, py::arg("loop_radius") = "");

    m.def(
        "catalog_entries",
        [](const std::string& path) {
            std::vector<std::string> names;
            for (const auto& e : load_catalog(path)) names.push_back(e.name);
            return names;
        },
        py::arg("path"));

    m.def(
        "catalog_classify",
        [](const std::string& path, const std::string& name, int samples) {
            auto catalog = load_catalog(path);
            const CatalogEntry& e = find_entry(catalog, name);
            IsotopyClass cls = classify(e.data, e.basis(), samples);
            py::dict out;
            out["bits"] = cls.bits;
            out["expected"] = e.expected_class_bits;
            out["trivial"] = cls.trivial();
            out["flat_data"] = cls.flat_data;
            return out;
        },
        py::arg("path"), py::arg("name"), py::arg("samples") = 256);

    m.def(
        "surface_grid",
        [](const std::string& g, const std::string& eta,
           const std::vector<std::pair<std::string, std::string>>& punctures, double r_min,
           double r_max, int n_r, int n_theta) {
            WeierstrassData data = data_from_strings(g, eta, punctures, "1");
            GridSpec spec;
            spec.r_min = r_min;
            spec.r_max = r_max;
            spec.n_r = n_r;
            spec.n_theta = n_theta;
            SurfaceGrid grid =
                integrate_real(data, spec, Complex(1, 0), Eigen::Vector3d::Zero());
            VerificationReport rep = verify_minimal(grid);
            py::dict out;
            out["values"] = Eigen::MatrixXd(grid.real_part());
            out["rows"] = spec.rows();
            out["cols"] = spec.cols();
            out["laplacian_max"] = rep.laplacian_max;
            out["conformality_max"] = rep.conformality_max;
            out["pass"] = rep.pass;
            return out;
        },
        "integrate the real part over a log-polar grid and verify minimality",
        py::arg("g"), py::arg("eta"), py::arg("punctures"), py::arg("r_min") = 0.5,
        py::arg("r_max") = 2.0, py::arg("n_r") = 24, py::arg("n_theta") = 64);

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
