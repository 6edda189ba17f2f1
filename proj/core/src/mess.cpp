#include "adsteich/mess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adsteich/optim.hpp"

namespace ats::mess {

using quake::earthquake;
using quake::LaminationSolve;
using quake::solve_connecting_lamination;
using quake::spectrum_distance;
using surf::CurveLibrary;
using surf::CurveWord;
using surf::genus2_library;

namespace {

Multicurve halved(const Multicurve& lam) {
    Multicurve out = lam;
    for (auto& c : out.components) c.weight /= 2.0;
    return out;
}

Multicurve single(const std::string& name, double w) {
    Multicurve mc;
    if (w > 0.0) mc.components.push_back({genus2_library().curve(name), w});
    return mc;
}

constexpr double kFuchsianTol = 1e-11;

} // namespace

double ScanTable::cell(size_t row, const std::string& col) const {
    return rows.at(row).at(static_cast<size_t>(column_index(col)));
}

int ScanTable::column_index(const std::string& col) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == col) return static_cast<int>(i);
    throw range_error("ScanTable: no column '" + col + "'");
}

double divergence_proxy(const MarkedStructure& h) {
    double m = 0;
    for (const CurveWord& c : genus2_library().curves())
        m = std::max(m, surf::curve_length(h, c));
    return m;
}

ConvexCoreData phi_forward(const GHMCStructure& g, const std::vector<Support>& supports,
                           const SolveOptions& opts) {
    if (supports.empty()) throw range_error("phi_forward: supports must be nonempty");
    ConvexCoreData core;

    if (quake::spectrum_distance_value(g.rho_l, g.rho_r) < kFuchsianTol) {
        // Fuchsian: the core degenerates, both boundary metrics coincide
        core.m_plus = g.rho_l;
        core.m_minus = g.rho_l;
        core.residuals = {0, 0, 0, 0};
        return core;
    }

    // rho_l = E^l_{2 lam+}(rho_r): the upper lamination is half the
    // left-earthquake solution from rho_r to rho_l.
    LaminationSolve up;
    try {
        up = solve_connecting_lamination(g.rho_r, g.rho_l, Side::Left, supports, opts);
    } catch (const convergence_error& e) {
        throw convergence_error("phi_forward: upper solve failed: " + std::string(e.what()),
                                e.best_residual);
    }
    core.lam_plus = halved(up.lamination);
    core.m_plus = earthquake(g.rho_r, core.lam_plus, Side::Left);

    // rho_l = E^r_{2 lam-}(rho_r): lower lamination from the right path.
    LaminationSolve down;
    try {
        down = solve_connecting_lamination(g.rho_r, g.rho_l, Side::Right, supports, opts);
    } catch (const convergence_error& e) {
        throw convergence_error("phi_forward: lower solve failed: " + std::string(e.what()),
                                e.best_residual);
    }
    core.lam_minus = halved(down.lamination);
    core.m_minus = earthquake(g.rho_r, core.lam_minus, Side::Right);

    core.residuals[0] =
        quake::spectrum_distance_value(earthquake(core.m_plus, core.lam_plus, Side::Left), g.rho_l);
    core.residuals[1] =
        quake::spectrum_distance_value(earthquake(core.m_plus, core.lam_plus, Side::Right), g.rho_r);
    core.residuals[2] =
        quake::spectrum_distance_value(earthquake(core.m_minus, core.lam_minus, Side::Right), g.rho_l);
    core.residuals[3] =
        quake::spectrum_distance_value(earthquake(core.m_minus, core.lam_minus, Side::Left), g.rho_r);
    return core;
}

PrescribeResult prescribe_boundary(const MarkedStructure& m_plus,
                                   const MarkedStructure& m_minus,
                                   const std::vector<Support>& supports_plus,
                                   const std::vector<Support>& supports_minus,
                                   const SolveOptions& opts) {
    if (supports_plus.empty() || supports_minus.empty())
        throw range_error("prescribe_boundary: support lists must be nonempty");

    PrescribeResult best;
    best.residual = std::numeric_limits<double>::infinity();

    if (quake::spectrum_distance_value(m_plus, m_minus) < kFuchsianTol) {
        best.holonomy = {m_plus, m_plus};
        best.core.m_plus = m_plus;
        best.core.m_minus = m_minus;
        best.residual = quake::spectrum_distance_value(m_plus, m_minus);
        best.converged = true;
        return best;
    }

    const CurveLibrary& lib = genus2_library();
    const std::vector<CurveWord> family = lib.filling_family();

    for (const Support& sp : supports_plus) {
        for (const Support& sm : supports_minus) {
            const size_t kp = sp.size(), km = sm.size();

            auto build = [&](const std::vector<double>& w, Multicurve* lp, Multicurve* lm) {
                lp->components.clear();
                lm->components.clear();
                for (size_t i = 0; i < kp; ++i)
                    if (w[i] > 1e-9) lp->components.push_back({lib.curve(sp[i]), w[i]});
                for (size_t i = 0; i < km; ++i)
                    if (w[kp + i] > 1e-9) lm->components.push_back({lib.curve(sm[i]), w[kp + i]});
            };

            opt::ResidualFn residuals = [&](const std::vector<double>& w) {
                Multicurve lp, lm;
                build(w, &lp, &lm);
                const MarkedStructure rl_from_plus = earthquake(m_plus, lp, Side::Left);
                const MarkedStructure rl_from_minus = earthquake(m_minus, lm, Side::Right);
                const MarkedStructure rr_from_plus = earthquake(m_plus, lp, Side::Right);
                const MarkedStructure rr_from_minus = earthquake(m_minus, lm, Side::Left);
                std::vector<double> r;
                r.reserve(2 * family.size());
                for (const CurveWord& c : family)
                    r.push_back(std::log(surf::curve_length(rl_from_plus, c) /
                                         surf::curve_length(rl_from_minus, c)));
                for (const CurveWord& c : family)
                    r.push_back(std::log(surf::curve_length(rr_from_plus, c) /
                                         surf::curve_length(rr_from_minus, c)));
                return r;
            };

            const std::vector<double> lo(kp + km, 0.0), hi(kp + km, opts.weight_max);
            opt::LMOptions lm_opts;
            lm_opts.max_iters = opts.max_iters;

            std::vector<std::vector<double>> starts;
            starts.emplace_back(kp + km, 0.0);
            Rng rng(derive_subseed(opts.seed, 0xadd + starts.size()));
            while (static_cast<int>(starts.size()) < opts.n_starts) {
                std::vector<double> x(kp + km);
                for (double& v : x) v = rng.uniform(0.0, opts.weight_max / 4.0);
                starts.push_back(std::move(x));
            }

            opt::LMResult sb;
            sb.cost = std::numeric_limits<double>::infinity();
            for (const auto& x0 : starts) {
                const opt::LMResult r = opt::levmar_box(residuals, x0, lo, hi, lm_opts);
                if (r.cost < sb.cost) sb = r;
            }

            Multicurve lp, lmc;
            build(sb.x, &lp, &lmc);
            const MarkedStructure rho_l = earthquake(m_plus, lp, Side::Left);
            const MarkedStructure rho_r = earthquake(m_plus, lp, Side::Right);
            const double res =
                quake::spectrum_distance(rho_l, earthquake(m_minus, lmc, Side::Right), family).value +
                quake::spectrum_distance(rho_r, earthquake(m_minus, lmc, Side::Left), family).value;

            if (res < best.residual) {
                best.residual = res;
                best.holonomy = {rho_l, rho_r};
                best.core.m_plus = m_plus;
                best.core.m_minus = m_minus;
                best.core.lam_plus = lp;
                best.core.lam_minus = lmc;
                best.converged = sb.converged;
            }
        }
    }

    // diagram residuals at the solution
    best.core.residuals[0] = quake::spectrum_distance_value(
        earthquake(best.core.m_plus, best.core.lam_plus, Side::Left), best.holonomy.rho_l);
    best.core.residuals[1] = quake::spectrum_distance_value(
        earthquake(best.core.m_plus, best.core.lam_plus, Side::Right), best.holonomy.rho_r);
    best.core.residuals[2] = quake::spectrum_distance_value(
        earthquake(best.core.m_minus, best.core.lam_minus, Side::Right), best.holonomy.rho_l);
    best.core.residuals[3] = quake::spectrum_distance_value(
        earthquake(best.core.m_minus, best.core.lam_minus, Side::Left), best.holonomy.rho_r);
    return best;
}

ScanTable prop5_scan(const MarkedStructure& m_plus_base, const std::string& curve,
                     double weight, const std::vector<double>& t_grid,
                     const std::vector<Support>& supports, const SolveOptions& opts) {
    if (t_grid.empty()) throw range_error("prop5_scan: empty grid");
    ScanTable table;
    table.columns = {"t",          "weight",     "l_plus",  "l_minus", "ratio",
                     "res_upper",  "res_lower",  "status"};

    for (double t : t_grid) {
        const double w = weight * t;
        std::vector<double> row(table.columns.size(), 0.0);
        row[0] = t;
        row[1] = w;
        try {
            const Multicurve lam = single(curve, w);
            if (lam.empty()) {
                // Fuchsian marker row: 0/0 ratio reported as nan
                row[2] = 0.0;
                row[3] = 0.0;
                row[4] = std::numeric_limits<double>::quiet_NaN();
                row[7] = kRowFuchsian;
            } else {
                const GHMCStructure g{earthquake(m_plus_base, lam, Side::Left),
                                      earthquake(m_plus_base, lam, Side::Right)};
                const ConvexCoreData core = phi_forward(g, supports, opts);
                const double lp = surf::multicurve_length(core.m_plus, lam);
                const double lm = surf::multicurve_length(core.m_minus, lam);
                row[2] = lp;
                row[3] = lm;
                row[4] = lm / lp;
                row[5] = std::max(core.residuals[0], core.residuals[1]);
                row[6] = std::max(core.residuals[2], core.residuals[3]);
                row[7] = kRowOk;
            }
        } catch (const std::exception&) {
            row[7] = kRowSolverFailed;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

ScanTable properness_probe(const std::vector<MarkedStructure>& m_plus_seq,
                           const std::string& curve, const std::vector<double>& t_seq,
                           const std::vector<Support>& supports,
                           const SolveOptions& opts) {
    if (m_plus_seq.size() < 3 || m_plus_seq.size() != t_seq.size())
        throw range_error("properness_probe: need matching sequences of length >= 3");

    ScanTable table;
    table.columns = {"n",          "t",         "proxy_rho_r", "l_plus_lam",
                     "proxy_mminus", "sd_mplus", "res_lower",  "status"};

    const MarkedStructure& base = m_plus_seq.front();
    for (size_t n = 0; n < m_plus_seq.size(); ++n) {
        std::vector<double> row(table.columns.size(), 0.0);
        row[0] = static_cast<double>(n);
        row[1] = t_seq[n];
        try {
            const Multicurve lam = single(curve, t_seq[n]);
            const GHMCStructure g{earthquake(m_plus_seq[n], lam, Side::Left),
                                  earthquake(m_plus_seq[n], lam, Side::Right)};
            row[2] = divergence_proxy(g.rho_r);
            const ConvexCoreData core = phi_forward(g, supports, opts);
            row[3] = lam.empty() ? 0.0 : surf::multicurve_length(core.m_plus, lam);
            row[4] = divergence_proxy(core.m_minus);
            row[5] = quake::spectrum_distance_value(core.m_plus, base);
            row[6] = std::max(core.residuals[2], core.residuals[3]);
            row[7] = lam.empty() ? kRowFuchsian : kRowOk;
        } catch (const std::exception&) {
            row[7] = kRowSolverFailed;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace ats::mess
