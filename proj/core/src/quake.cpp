#include "adsteich/quake.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "adsteich/optim.hpp"
#include "adsteich/rng.hpp"

namespace ats::quake {

using surf::CurveLibrary;
using surf::FNCoords;
using surf::genus2_library;
using surf::MappingClass;
using surf::PantsDecomposition;

namespace {

// slot of each support curve inside a decomposition, or empty if the
// support does not fit
std::vector<int> match_support(const std::vector<std::string>& names,
                               const PantsDecomposition& P) {
    std::vector<int> slots;
    for (const auto& n : names) {
        int slot = -1;
        for (int i = 0; i < 3; ++i)
            if (P.curves[static_cast<size_t>(i)].name == n) slot = i;
        if (slot < 0) return {};
        slots.push_back(slot);
    }
    return slots;
}

const PantsDecomposition* find_decomposition(const std::vector<std::string>& names,
                                             std::vector<int>* slots_out) {
    if (names.empty()) return nullptr;
    for (const auto& P : surf::library_decompositions()) {
        auto slots = match_support(names, P);
        if (!slots.empty()) {
            *slots_out = slots;
            return &P;
        }
    }
    return nullptr;
}

// Re-marking route: find a named mapping class phi such that the pulled
// back support phi^{-1}(curves) fits a library decomposition.
struct RemarkedSupport {
    const MappingClass* phi = nullptr;
    const PantsDecomposition* P = nullptr;
    std::vector<int> slots;
};

bool match_remarked(const Multicurve& lam, RemarkedSupport* out) {
    const surf::SurfaceGroup G(2);
    for (const auto& phi : surf::library_mapping_classes()) {
        if (phi.name == "id") continue;
        for (const auto& P : surf::library_decompositions()) {
            std::vector<int> slots;
            bool ok = true;
            for (const auto& comp : lam.components) {
                const surf::Word pulled =
                    surf::substitute(comp.curve.word, phi.inverse_images);
                int slot = -1;
                for (int i = 0; i < 3; ++i) {
                    const auto& cw = P.curves[static_cast<size_t>(i)].word;
                    if (surf::cyclically_equal(pulled, cw) ||
                        surf::cyclically_equal(pulled, surf::inverse(cw)))
                        slot = i;
                }
                if (slot < 0) {
                    ok = false;
                    break;
                }
                slots.push_back(slot);
            }
            if (ok) {
                out->phi = &phi;
                out->P = &P;
                out->slots = slots;
                return true;
            }
        }
    }
    return false;
}

MappingClass inverse_class(const MappingClass& phi) {
    return MappingClass{phi.name + "_inv", phi.inverse_images, phi.images};
}

} // namespace

MarkedStructure earthquake(const MarkedStructure& h, const Multicurve& lam, Side side) {
    if (lam.empty()) return h;
    surf::validate_multicurve(lam, genus2_library());

    std::vector<std::string> names;
    for (const auto& comp : lam.components) names.push_back(comp.curve.name);

    const double sign = side == Side::Left ? 1.0 : -1.0;

    std::vector<int> slots;
    if (const PantsDecomposition* P = find_decomposition(names, &slots)) {
        FNCoords fn = holonomy_to_fn(h, *P);
        for (size_t i = 0; i < slots.size(); ++i)
            fn.twists[static_cast<size_t>(slots[i])] += sign * lam.components[i].weight;
        return surf::fn_to_holonomy(fn, *P);
    }

    RemarkedSupport rm;
    if (match_remarked(lam, &rm)) {
        const MappingClass phi_inv = inverse_class(*rm.phi);
        MarkedStructure pulled = surf::apply_mapping_class(h, phi_inv);
        FNCoords fn = holonomy_to_fn(pulled, *rm.P);
        for (size_t i = 0; i < rm.slots.size(); ++i)
            fn.twists[static_cast<size_t>(rm.slots[i])] += sign * lam.components[i].weight;
        const MarkedStructure deformed = surf::fn_to_holonomy(fn, *rm.P);
        return surf::apply_mapping_class(deformed, *rm.phi);
    }

    throw geom_error("earthquake: support is not carried by any library decomposition");
}

MarkedStructure earthquake(const EarthquakeSpec& spec) {
    for (const auto& comp : spec.lam.components)
        if (!std::isfinite(comp.weight))
            throw range_error("earthquake: weights must be finite");
    return earthquake(spec.base, spec.lam, spec.side);
}

SpectrumDistanceReport spectrum_distance(const MarkedStructure& h1,
                                         const MarkedStructure& h2,
                                         const std::vector<CurveWord>& family) {
    if (family.empty()) throw range_error("spectrum_distance: family must be nonempty");
    SpectrumDistanceReport rep;
    for (const CurveWord& c : family) {
        const double r =
            std::log(surf::curve_length(h1, c) / surf::curve_length(h2, c));
        rep.log_ratios.emplace_back(c.name, r);
        if (std::abs(r) > rep.value) {
            rep.value = std::abs(r);
            rep.witness = c.name;
        }
    }
    return rep;
}

SpectrumDistanceReport spectrum_distance(const MarkedStructure& h1,
                                         const MarkedStructure& h2) {
    return spectrum_distance(h1, h2, genus2_library().filling_family());
}

double spectrum_distance_value(const MarkedStructure& h1, const MarkedStructure& h2) {
    return spectrum_distance(h1, h2).value;
}

std::vector<Support> default_supports() {
    std::vector<Support> out;
    for (const auto& P : surf::library_decompositions())
        out.push_back({P.curves[0].name, P.curves[1].name, P.curves[2].name});
    return out;
}

namespace {

std::string join_names(const Support& s) {
    std::string out;
    for (const auto& n : s) {
        if (!out.empty()) out += "+";
        out += n;
    }
    return out;
}

struct SupportBest {
    std::vector<double> weights;
    double cost = 1e300;
    bool converged = false;
};

} // namespace

LaminationSolve solve_connecting_lamination(const MarkedStructure& m,
                                            const MarkedStructure& target, Side side,
                                            const std::vector<Support>& supports,
                                            const SolveOptions& opts) {
    if (supports.empty())
        throw range_error("solve_connecting_lamination: need at least one support");
    const CurveLibrary& lib = genus2_library();
    const std::vector<CurveWord> family = lib.filling_family();
    const double sign = side == Side::Left ? 1.0 : -1.0;

    std::vector<double> target_len;
    target_len.reserve(family.size());
    for (const auto& c : family) target_len.push_back(surf::curve_length(target, c));

    LaminationSolve best;
    best.residual = 1e300;
    std::vector<std::pair<std::string, double>> all_results;

    for (size_t si = 0; si < supports.size(); ++si) {
        const Support& names = supports[si];
        std::vector<int> slots;
        const PantsDecomposition* P = find_decomposition(names, &slots);
        if (!P || names.empty()) continue;

        const FNCoords fn0 = holonomy_to_fn(m, *P);
        const size_t k = names.size();

        opt::ResidualFn residuals = [&](const std::vector<double>& w) {
            FNCoords fn = fn0;
            for (size_t i = 0; i < k; ++i)
                fn.twists[static_cast<size_t>(slots[i])] += sign * w[i];
            const MarkedStructure trial = surf::detail::fn_to_holonomy_unchecked(fn, *P);
            std::vector<double> r(family.size());
            for (size_t i = 0; i < family.size(); ++i)
                r[i] = std::log(surf::curve_length(trial, family[i]) / target_len[i]);
            return r;
        };

        const std::vector<double> lo(k, 0.0), hi(k, opts.weight_max);
        opt::LMOptions lm;
        lm.max_iters = opts.max_iters;

        // deterministic multistart
        std::vector<std::vector<double>> starts;
        starts.emplace_back(k, 0.0);
        Rng rng(derive_subseed(opts.seed, si));
        while (static_cast<int>(starts.size()) < opts.n_starts) {
            std::vector<double> x(k);
            for (double& v : x) v = rng.uniform(0.0, opts.weight_max / 3.0);
            starts.push_back(std::move(x));
        }

        std::vector<opt::LMResult> results(starts.size());
        auto run_range = [&](size_t lo_i, size_t hi_i) {
            for (size_t i = lo_i; i < hi_i; ++i)
                results[i] = opt::levmar_box(residuals, starts[i], lo, hi, lm);
        };
        if (opts.threads > 1 && starts.size() > 1) {
            const size_t nt = std::min<size_t>(static_cast<size_t>(opts.threads), starts.size());
            std::vector<std::future<void>> futs;
            const size_t chunk = (starts.size() + nt - 1) / nt;
            for (size_t t = 0; t < nt; ++t) {
                const size_t a = t * chunk, b = std::min(starts.size(), a + chunk);
                if (a >= b) break;
                futs.push_back(std::async(std::launch::async, run_range, a, b));
            }
            for (auto& f : futs) f.get();
        } else {
            run_range(0, starts.size());
        }

        SupportBest sb;
        for (const auto& r : results) {
            if (r.cost < sb.cost - 1e-18) {
                sb.cost = r.cost;
                sb.weights = r.x;
                sb.converged = r.converged;
            }
        }

        // assemble the candidate lamination and its true residual
        Multicurve lam;
        for (size_t i = 0; i < k; ++i) {
            if (sb.weights[i] > 1e-9)
                lam.components.push_back({lib.curve(names[i]), sb.weights[i]});
        }
        const MarkedStructure moved = earthquake(m, lam, side);
        const double res = spectrum_distance(moved, target, family).value;
        all_results.emplace_back(join_names(names), res);

        if (res < best.residual) {
            best.residual = res;
            best.lamination = lam;
            best.support_name = join_names(names);
            best.converged = sb.converged;
        }
    }

    if (best.residual >= 1e300)
        throw convergence_error("solve_connecting_lamination: no usable support", 1e300);

    for (const auto& [name, res] : all_results)
        if (name != best.support_name && res <= best.residual + opts.tie_tol)
            best.ties.emplace_back(name, res);
    return best;
}

} // namespace ats::quake
