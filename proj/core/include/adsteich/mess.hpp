#pragma once

// The correspondence between holonomy pairs (rho_l, rho_r) and convex-core
// boundary data (m_plus, m_minus, lam_plus, lam_minus), computed through
// the earthquake relations
//   rho_l = E^l_{lam+}(m+)   rho_r = E^r_{lam+}(m+)
//   rho_l = E^r_{lam-}(m-)   rho_r = E^l_{lam-}(m-),
// so m+ is the midpoint of the left-earthquake path from rho_r to rho_l
// and m- the midpoint of the right path from rho_r to rho_l. All solves go
// through finite support lists; results always carry their residuals.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "adsteich/quake.hpp"

namespace ats::mess {

using quake::Side;
using quake::SolveOptions;
using quake::Support;
using surf::MarkedStructure;
using surf::Multicurve;

struct GHMCStructure {
    MarkedStructure rho_l, rho_r;
};

struct ConvexCoreData {
    MarkedStructure m_plus, m_minus;
    Multicurve lam_plus, lam_minus;
    // spectrum-distance residuals of the four diagram equations, in the
    // order of the comment above
    std::array<double, 4> residuals{0, 0, 0, 0};
    double max_residual() const {
        return std::max(std::max(residuals[0], residuals[1]),
                        std::max(residuals[2], residuals[3]));
    }
};

// Generic numeric table with named columns; rows in scan order.
struct ScanTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    double cell(size_t row, const std::string& col) const;
    int column_index(const std::string& col) const;
};

// Row status codes used by the scans.
enum RowStatus : int { kRowOk = 0, kRowFuchsian = 1, kRowSolverFailed = 2 };

// ---------------------------------------------------------------- forward

// Boundary data of the GHMC structure with the given holonomy pair,
// through connecting-lamination solves over the candidate supports.
ConvexCoreData phi_forward(const GHMCStructure& g, const std::vector<Support>& supports,
                           const SolveOptions& opts = {});

// --------------------------------------------------------------- inverse

struct PrescribeResult {
    GHMCStructure holonomy;
    ConvexCoreData core;
    double residual = 0;
    bool converged = false;
};

// The boundary-prescription solve: finds weights on the candidate support
// pair making the two earthquake paths share their endpoints, i.e.
// E^l_{lam+}(m+) = E^r_{lam-}(m-) and E^r_{lam+}(m+) = E^l_{lam-}(m-).
PrescribeResult prescribe_boundary(const MarkedStructure& m_plus,
                                   const MarkedStructure& m_minus,
                                   const std::vector<Support>& supports_plus,
                                   const std::vector<Support>& supports_minus,
                                   const SolveOptions& opts = {});

// ------------------------------------------------------------------ scans

// Fabricates lam+ = (c, w t) over the grid, builds (rho_l, rho_r) from
// (m_plus_base, lam+), recovers the core through phi_forward and records
// the two lengths of lam+ and their ratio.
ScanTable prop5_scan(const MarkedStructure& m_plus_base, const std::string& curve,
                     double weight, const std::vector<double>& t_grid,
                     const std::vector<Support>& supports, const SolveOptions& opts = {});

// Fabricated diverging sequence with m_plus pinned in a small ball:
// records the divergence proxy (max library-curve length) of m_minus^n
// together with the quantities whose equivalence the properness argument
// uses.
ScanTable properness_probe(const std::vector<MarkedStructure>& m_plus_seq,
                           const std::string& curve, const std::vector<double>& t_seq,
                           const std::vector<Support>& supports,
                           const SolveOptions& opts = {});

// max library-curve length: the leaves-every-compact proxy
double divergence_proxy(const MarkedStructure& h);

} // namespace ats::mess
