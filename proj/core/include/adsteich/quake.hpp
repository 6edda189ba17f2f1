#pragma once

// Left/right earthquakes along multicurves supported in a library chart,
// the sup-log-ratio spectrum proxy, and the numerical earthquake-theorem
// solver (recover the lamination connecting two marked structures).
//
// Sign convention: a left earthquake adds its weight to the twist
// coordinate of each supported curve in the chart shipped with the
// library; a right earthquake subtracts it.

#include <cstdint>
#include <string>
#include <vector>

#include "adsteich/surface.hpp"

namespace ats::quake {

using surf::CurveWord;
using surf::MarkedStructure;
using surf::Multicurve;

enum class Side { Left, Right };

struct EarthquakeSpec {
    MarkedStructure base;
    Multicurve lam;
    Side side = Side::Left;
};

// Twist-coordinate shift in the chart of the decomposition carrying the
// support; lengths of supported curves are preserved. Supports reachable
// through a named re-marking are pulled back, deformed and pushed forward.
MarkedStructure earthquake(const EarthquakeSpec& spec);
MarkedStructure earthquake(const MarkedStructure& h, const Multicurve& lam, Side side);

struct SpectrumDistanceReport {
    double value = 0;
    std::string witness;
    std::vector<std::pair<std::string, double>> log_ratios;
};

// max over the family of |log(l_h1(c) / l_h2(c))|; zero iff the spectra
// agree on the family.
SpectrumDistanceReport spectrum_distance(const MarkedStructure& h1,
                                         const MarkedStructure& h2,
                                         const std::vector<CurveWord>& family);
SpectrumDistanceReport spectrum_distance(const MarkedStructure& h1,
                                         const MarkedStructure& h2);
double spectrum_distance_value(const MarkedStructure& h1, const MarkedStructure& h2);

// A candidate support: curve names that must fit one library decomposition
// together (up to a named re-marking).
using Support = std::vector<std::string>;

std::vector<Support> default_supports();

struct SolveOptions {
    int n_starts = 8;
    int max_iters = 500;
    double weight_max = 20.0;
    std::uint64_t seed = 0x51ee7;
    double tie_tol = 1e-7;
    int threads = 1;  // parallelism across multistarts only
};

struct LaminationSolve {
    Multicurve lamination;
    double residual = 0;       // spectrum distance at the solution
    std::string support_name;  // joined curve names of the winning support
    bool converged = false;
    // supports whose best residual ties the winner within tie_tol
    std::vector<std::pair<std::string, double>> ties;
};

// Finds nonnegative weights w on each candidate support minimizing
// spectrum_distance(earthquake(m, lam_w, side), target); returns the best
// across supports. Exact recovery is guaranteed only for targets that were
// forward-constructed from a library support.
LaminationSolve solve_connecting_lamination(const MarkedStructure& m,
                                            const MarkedStructure& target, Side side,
                                            const std::vector<Support>& supports,
                                            const SolveOptions& opts = {});

} // namespace ats::quake
