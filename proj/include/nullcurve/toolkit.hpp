#pragma once

#include <iosfwd>

#include "nullcurve/weierstrass.hpp"

namespace nullcurve {

/// Catalog entry: Weierstrass data plus the expected classification and
/// period/flux values it is checked against.
struct CatalogEntry {
    std::string name;
    WeierstrassData data;
    std::optional<mpq_class> loop_radius;  // fixed basis-loop radius, when pinned
    std::vector<int> expected_class_bits;
    std::optional<std::vector<CVec>> expected_periods;
    std::optional<std::vector<Eigen::VectorXd>> expected_flux;
    std::string expected_source;  // "literature" or "computed"

    std::vector<BasisLoop> basis() const {
        return homology_basis(data.domain, {}, loop_radius);
    }
};

std::vector<CatalogEntry> load_catalog(const std::string& path);
const CatalogEntry& find_entry(const std::vector<CatalogEntry>& catalog,
                               const std::string& name);

/// Domain <-> JSON ({kind, punctures: [["p/q","p/q"],...], label}).
std::string domain_to_json(const PuncturedDomain& domain);
PuncturedDomain domain_from_json_text(const std::string& text);

/// Wavefront OBJ export of a real-valued grid in R^3: vertices in row-major
/// node order, quads split into counterclockwise triangles, the angular seam
/// welded on wrapped grids. Byte-deterministic for fixed input.
void export_mesh(const SurfaceGrid& grid, std::ostream& out);
void export_mesh_file(const SurfaceGrid& grid, const std::string& path);

/// Finite-difference minimality check on a chart grid: 5-point Laplacian,
/// conformality residual | |u_x|^2 - |u_y|^2 | + |u_x . u_y|, and the nullity
/// defect of u_x - i u_y.
struct VerificationReport {
    double laplacian_max = 0;
    double conformality_max = 0;
    double nullity_max = 0;
    double threshold = 0;
    bool pass = false;
};

VerificationReport verify_minimal(const SurfaceGrid& grid, double threshold_constant = 50.0);

} // namespace nullcurve
