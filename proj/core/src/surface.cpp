#include "adsteich/surface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ats::surf {

using hyp::Isometry;

// ---------------------------------------------------------------- library

const CurveWord& CurveLibrary::curve(const std::string& name) const {
    for (const auto& c : curves_)
        if (c.name == name) return c;
    throw range_error("curve library: unknown curve '" + name + "'");
}

bool CurveLibrary::has_curve(const std::string& name) const {
    for (const auto& c : curves_)
        if (c.name == name) return true;
    return false;
}

void CurveLibrary::set_intersection(const std::string& a, const std::string& b, int v) {
    table_[{std::min(a, b), std::max(a, b)}] = v;
}

int CurveLibrary::table_intersection(const std::string& a, const std::string& b) const {
    const auto it = table_.find({std::min(a, b), std::max(a, b)});
    if (it == table_.end())
        throw range_error("curve library: pair (" + a + ", " + b + ") not in table");
    return it->second;
}

std::vector<CurveWord> CurveLibrary::filling_family() const { return curves_; }

CurveLibrary CurveLibrary::parse(const std::string& text) {
    CurveLibrary lib;
    std::istringstream in(text);
    std::string line;
    bool in_table = false;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "version") {
            ls >> lib.version;
        } else if (tok == "genus") {
            ls >> lib.genus;
        } else if (tok == "curve") {
            CurveWord c;
            std::string flag;
            ls >> c.name;
            std::string rest;
            // flags up to ':', then the word
            bool seen_colon = false;
            std::string word_text;
            while (ls >> flag) {
                if (flag == ":") { seen_colon = true; continue; }
                if (!seen_colon) {
                    if (flag == "simple") c.simple = true;
                    else if (flag == "nonsimple") c.simple = false;
                    else if (flag == "separating") c.separating = true;
                    else if (flag == "nonseparating") c.separating = false;
                    else throw validation_error("curve_library", "unknown flag '" + flag + "'");
                } else {
                    word_text += flag + " ";
                }
            }
            c.word = cyclic_reduce(parse_word(word_text, lib.genus));
            if (c.word.empty()) throw validation_error("curve_library", "empty curve word");
            lib.add_curve(std::move(c));
        } else if (tok == "intersections") {
            in_table = true;
        } else if (tok == "end") {
            in_table = false;
        } else if (in_table) {
            std::string b;
            int v = 0;
            ls >> b >> v;
            lib.set_intersection(tok, b, v);
        } else {
            throw validation_error("curve_library", "unexpected token '" + tok + "'");
        }
    }
    if (lib.version == 0) throw validation_error("curve_library", "missing version");
    return lib;
}

const CurveLibrary& genus2_library() {
    static const CurveLibrary lib = CurveLibrary::parse(genus2_library_text());
    return lib;
}

// ---------------------------------------------------------------- charts

std::string slope_name(HandleSlope s) {
    switch (s) {
        case HandleSlope::A: return "a";
        case HandleSlope::B: return "b";
        case HandleSlope::AB: return "ab";
    }
    throw internal_error("bad slope");
}

namespace {

std::string handle_curve_name(HandleSlope s, int handle) {
    const std::string idx = std::to_string(handle + 1);
    switch (s) {
        case HandleSlope::A: return "a" + idx;
        case HandleSlope::B: return "b" + idx;
        case HandleSlope::AB: return "ab" + idx;
    }
    throw internal_error("bad slope");
}

} // namespace

PantsDecomposition make_decomposition(HandleSlope h1, HandleSlope h2) {
    PantsDecomposition P;
    P.slopes = {h1, h2};
    P.name = "P_" + slope_name(h1) + "_" + slope_name(h2);
    const CurveLibrary& lib = genus2_library();
    P.curves[0] = lib.curve(handle_curve_name(h1, 0));
    P.curves[1] = lib.curve(handle_curve_name(h2, 1));
    P.curves[2] = lib.curve("k");
    return P;
}

const std::vector<PantsDecomposition>& library_decompositions() {
    static const std::vector<PantsDecomposition> all = [] {
        std::vector<PantsDecomposition> v;
        const HandleSlope slopes[3] = {HandleSlope::A, HandleSlope::B, HandleSlope::AB};
        for (HandleSlope s1 : slopes)
            for (HandleSlope s2 : slopes) v.push_back(make_decomposition(s1, s2));
        return v;
    }();
    return all;
}

const PantsDecomposition& decomposition_by_name(const std::string& name) {
    for (const auto& P : library_decompositions())
        if (P.name == name) return P;
    throw range_error("unknown pants decomposition '" + name + "'");
}

// ------------------------------------------------------------ construction

namespace {

// Secondary half-length: the zero-twist transverse curve of a handle with
// interior curve length lu and boundary commutator length lk satisfies
// sinh(lu/2) sinh(lam/2) = cosh(lk/4).
double secondary_half_length(double lu, double lk) {
    return std::asinh(std::cosh(lk / 4.0) / std::sinh(lu / 2.0));
}

Mat2 twist_matrix(double tau) {
    return Mat2::diag(std::exp(tau / 2.0), std::exp(-tau / 2.0));
}

struct HandleBasis {
    Mat2 U, V;  // images of the chart basis pair (u, v) of the handle
};

// Canonical handle frame: U diagonal along the imaginary axis, V twisted
// off the symmetric zero-twist solution whose axis crosses at i.
HandleBasis canonical_handle(double lu, double lk, double tau) {
    const double m = std::exp(lu / 2.0);
    const double lh = secondary_half_length(lu, lk);
    const double ch = std::cosh(lh), sh = std::sinh(lh);
    const Mat2 V0{ch, -sh, -sh, ch};
    return {Mat2::diag(m, 1.0 / m), twist_matrix(tau) * V0};
}

// Standard generator images (A, B) of the handle from its chart basis.
void generators_from_basis(HandleSlope s, const Mat2& U, const Mat2& V, Mat2& A, Mat2& B) {
    switch (s) {
        case HandleSlope::A:  // basis (a, b)
            A = U;
            B = V;
            return;
        case HandleSlope::B:  // basis (b, a^-1)
            A = V.inv_unit();
            B = U;
            return;
        case HandleSlope::AB:  // basis (ab, b)
            A = U * V.inv_unit();
            B = V;
            return;
    }
    throw internal_error("bad slope");
}

Mat2 commutator(const Mat2& A, const Mat2& B) {
    return A * B * A.inv_unit() * B.inv_unit();
}

// Columns are the attracting and repelling eigenvectors; Q M Q^-1 is the
// exact diagonal of eigenvalues, attracting first.
Mat2 diagonalizer(const Mat2& M) {
    const double tr = M.trace();
    if (std::abs(tr) <= 2.0)
        throw geom_error("diagonalizer: matrix is not hyperbolic");
    const double disc = std::sqrt(tr * tr - 4.0);
    const double l_att = tr >= 0.0 ? (tr + disc) / 2.0 : (tr - disc) / 2.0;
    const double l_rep = tr >= 0.0 ? (tr - disc) / 2.0 : (tr + disc) / 2.0;

    auto eigvec = [&M](double lambda, double& x, double& y) {
        // rows of (M - lambda I) are proportional; take the better-scaled kernel
        const double n1 = std::hypot(M.b, lambda - M.a);
        const double n2 = std::hypot(lambda - M.d, M.c);
        if (n1 >= n2) {
            x = M.b / n1;
            y = (lambda - M.a) / n1;
        } else {
            x = (lambda - M.d) / n2;
            y = M.c / n2;
        }
    };
    double x1, y1, x2, y2;
    eigvec(l_att, x1, y1);
    eigvec(l_rep, x2, y2);
    double det = x1 * y2 - x2 * y1;
    if (std::abs(det) < 1e-14)
        throw internal_error("diagonalizer: defective eigenvectors");
    if (det < 0.0) {
        x2 = -x2;
        y2 = -y2;
        det = -det;
    }
    const double s = 1.0 / std::sqrt(det);
    const Mat2 V{x1 * s, x2 * s, y1 * s, y2 * s};
    return V.inv_unit();
}

// Orientation convention for attaching the second handle across the
// separating curve; pinned by the library hyperbolicity regression test.
constexpr bool kFlipSecondHandle = false;

const Mat2 kHalfTurn{0.0, -1.0, 1.0, 0.0};

} // namespace

namespace detail {

MarkedStructure fn_to_holonomy_unchecked(const FNCoords& fn, const PantsDecomposition& P) {
    for (int i = 0; i < 3; ++i) {
        if (!(fn.lengths[i] > 0.0))
            throw range_error("fn_to_holonomy: lengths must be positive");
        if (fn.lengths[i] > 50.0)
            throw range_error("fn_to_holonomy: length coordinate exceeds 50");
        if (!std::isfinite(fn.twists[i]))
            throw range_error("fn_to_holonomy: twist must be finite");
    }

    // handle 1 in the canonical frame
    const HandleBasis h1 = canonical_handle(fn.lengths[0], fn.lengths[2], fn.twists[0]);
    Mat2 A1, B1;
    generators_from_basis(P.slopes[0], h1.U, h1.V, A1, B1);
    const Mat2 K1 = commutator(A1, B1);

    // handle 2 in its own frame, then conjugated so [A2,B2] = K1^-1 exactly
    const HandleBasis h2 = canonical_handle(fn.lengths[1], fn.lengths[2], fn.twists[1]);
    Mat2 A2, B2;
    generators_from_basis(P.slopes[1], h2.U, h2.V, A2, B2);
    if (kFlipSecondHandle) {
        A2 = kHalfTurn * A2 * kHalfTurn.inv_unit();
        B2 = kHalfTurn * B2 * kHalfTurn.inv_unit();
    }
    const Mat2 K2 = commutator(A2, B2);

    const Mat2 Q1 = diagonalizer(K1.inv_unit());
    const Mat2 Q2 = diagonalizer(K2);
    const Mat2 J = Q1.inv_unit() * twist_matrix(fn.twists[2]) * Q2;
    A2 = J * A2 * J.inv_unit();
    B2 = J * B2 * J.inv_unit();

    MarkedStructure out;
    out.generators = {Isometry(A1), Isometry(B1), Isometry(A2), Isometry(B2)};
    out.decomposition = P.name;
    out.relator_residual = psl2_distance(commutator(A1, B1) * commutator(A2, B2),
                                         Mat2::identity());
    if (out.relator_residual > 1e-9)
        throw internal_error("fn_to_holonomy: relator residual too large");
    return out;
}

} // namespace detail

MarkedStructure fn_to_holonomy(const FNCoords& fn, const PantsDecomposition& P) {
    MarkedStructure out = detail::fn_to_holonomy_unchecked(fn, P);
    // desk-scale discreteness spot check
    for (const CurveWord& c : genus2_library().curves()) {
        const double t = std::abs(holonomy(out, c.word).trace());
        if (t <= 2.0)
            throw geom_error("fn_to_holonomy: library curve '" + c.name +
                             "' came out non-hyperbolic");
    }
    return out;
}

hyp::Isometry holonomy(const MarkedStructure& h, const Word& w) {
    Mat2 m = Mat2::identity();
    for (Letter l : w) {
        const size_t g = static_cast<size_t>(std::abs(l)) - 1;
        if (g >= h.generators.size())
            throw range_error("holonomy: letter outside generator range");
        const Mat2& gm = h.generators[g].mat();
        m = m * (l > 0 ? gm : gm.inv_unit());
    }
    return Isometry(m);
}

// ------------------------------------------------------------- inverse map

namespace {

Word chart_u_word(const PantsDecomposition& P, int handle, const SurfaceGroup& G) {
    const Letter a = G.a(handle), b = G.b(handle);
    switch (P.slopes[static_cast<size_t>(handle)]) {
        case HandleSlope::A: return {a};
        case HandleSlope::B: return {b};
        case HandleSlope::AB: return {a, b};
    }
    throw internal_error("bad slope");
}

Word chart_v_word(const PantsDecomposition& P, int handle, const SurfaceGroup& G) {
    const Letter a = G.a(handle), b = G.b(handle);
    switch (P.slopes[static_cast<size_t>(handle)]) {
        case HandleSlope::A: return {b};
        case HandleSlope::B: return {static_cast<Letter>(-a)};
        case HandleSlope::AB: return {b};
    }
    throw internal_error("bad slope");
}

double recover_handle_twist(const MarkedStructure& h, const PantsDecomposition& P,
                            int handle, double lu, double lk, const SurfaceGroup& G) {
    const double lh = secondary_half_length(lu, lk);
    const Word wu = chart_u_word(P, handle, G);
    const Word wv = chart_v_word(P, handle, G);
    const double tv = std::abs(holonomy(h, wv).trace());
    const double tuv = std::abs(holonomy(h, concat(wu, wv)).trace());

    const double c = tv / (2.0 * std::cosh(lh));
    const double tau_abs = 2.0 * std::acosh(std::max(1.0, c));
    // the u*v trace breaks the sign tie: |tr| = 2 cosh(lam/2) cosh((tau+lu)/2)
    auto predicted = [&](double tau) {
        return 2.0 * std::cosh(lh) * std::cosh((tau + lu) / 2.0);
    };
    const double err_pos = std::abs(predicted(tau_abs) - tuv);
    const double err_neg = std::abs(predicted(-tau_abs) - tuv);
    return err_pos <= err_neg ? tau_abs : -tau_abs;
}

double trace_abs(const MarkedStructure& h, const Word& w) {
    return std::abs(holonomy(h, w).trace());
}

} // namespace

FNCoords holonomy_to_fn(const MarkedStructure& h, const PantsDecomposition& P,
                        const FNCoords* seed) {
    const SurfaceGroup G(h.genus);
    const CurveLibrary& lib = genus2_library();

    FNCoords fn;
    fn.lengths[2] = hyp::translation_length(holonomy(h, lib.curve("k").word));
    for (int handle = 0; handle < 2; ++handle) {
        const Word wu = chart_u_word(P, handle, G);
        fn.lengths[static_cast<size_t>(handle)] =
            hyp::translation_length(holonomy(h, wu));
        fn.twists[static_cast<size_t>(handle)] = recover_handle_twist(
            h, P, handle, fn.lengths[static_cast<size_t>(handle)], fn.lengths[2], G);
    }

    // Separating twist: 1-D trace matching on two cross curves, continuation
    // seeded. Grid scan then local golden-section polish.
    const Word wx = lib.curve("x12").word;
    const Word wy = lib.curve("y12").word;
    const double tx = trace_abs(h, wx);
    const double ty = trace_abs(h, wy);

    auto mismatch = [&](double tau3) {
        FNCoords trial = fn;
        trial.twists[2] = tau3;
        const MarkedStructure r = detail::fn_to_holonomy_unchecked(trial, P);
        const double ex = std::log(trace_abs(r, wx) / tx);
        const double ey = std::log(trace_abs(r, wy) / ty);
        return ex * ex + ey * ey;
    };

    const double center = seed ? seed->twists[2] : 0.0;
    const double window = 24.0;
    double best_tau = center;
    double best_val = mismatch(center);
    const int n_grid = 193;
    for (int i = 0; i < n_grid; ++i) {
        const double tau = center - window + 2.0 * window * i / (n_grid - 1);
        const double v = mismatch(tau);
        if (v < best_val - 1e-15 ||
            (std::abs(v - best_val) <= 1e-15 &&
             std::abs(tau - center) < std::abs(best_tau - center))) {
            best_val = v;
            best_tau = tau;
        }
    }
    // golden-section on the bracketing cell
    double lo = best_tau - 2.0 * window / (n_grid - 1);
    double hi = best_tau + 2.0 * window / (n_grid - 1);
    const double gr = 0.6180339887498949;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = mismatch(x1), f2 = mismatch(x2);
    for (int it = 0; it < 90; ++it) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = mismatch(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = mismatch(x2);
        }
    }
    fn.twists[2] = f1 < f2 ? x1 : x2;
    const double final_val = std::min(f1, f2);
    if (!(final_val < 1e-12))
        throw convergence_error("holonomy_to_fn: separating twist inversion did not converge",
                                std::sqrt(final_val));
    return fn;
}

// ----------------------------------------------------------------- lengths

double curve_length(const MarkedStructure& h, const Word& w) {
    return hyp::translation_length(holonomy(h, w));
}

double curve_length(const MarkedStructure& h, const CurveWord& c) {
    return curve_length(h, c.word);
}

double multicurve_length(const MarkedStructure& h, const Multicurve& mc) {
    double total = 0.0;
    for (const auto& wc : mc.components) total += wc.weight * curve_length(h, wc.curve);
    return total;
}

void validate_multicurve(const Multicurve& mc, const CurveLibrary& lib) {
    for (size_t i = 0; i < mc.components.size(); ++i) {
        const auto& ci = mc.components[i];
        if (!(ci.weight > 0.0))
            throw geom_error("multicurve: weights must be positive");
        for (size_t j = i + 1; j < mc.components.size(); ++j) {
            const auto& cj = mc.components[j];
            if (ci.curve.name == cj.curve.name)
                throw geom_error("multicurve: repeated curve '" + ci.curve.name + "'");
            if (lib.table_intersection(ci.curve.name, cj.curve.name) != 0)
                throw geom_error("multicurve: components '" + ci.curve.name + "' and '" +
                                 cj.curve.name + "' intersect");
        }
    }
}

// --------------------------------------------------------- mapping classes

bool preserves_relator(const MappingClass& phi, const SurfaceGroup& G) {
    if (phi.images.size() != static_cast<size_t>(G.n_generators())) return false;
    const Word im = substitute(G.relator(), phi.images);
    return cyclically_equal(im, G.relator()) ||
           cyclically_equal(im, inverse(G.relator()));
}

MarkedStructure apply_mapping_class(const MarkedStructure& h, const MappingClass& phi) {
    const SurfaceGroup G(h.genus);
    if (!preserves_relator(phi, G))
        throw geom_error("apply_mapping_class: '" + phi.name +
                         "' does not preserve the relator");
    // sanity: the inverse data must actually invert the class
    for (int g = 0; g < G.n_generators(); ++g) {
        const Word round = substitute(phi.inverse_images[static_cast<size_t>(g)], phi.images);
        if (!(round.size() == 1 && round[0] == static_cast<Letter>(g + 1)))
            throw geom_error("apply_mapping_class: '" + phi.name +
                             "' inverse data is not an inverse");
    }
    MarkedStructure out = h;
    for (size_t g = 0; g < h.generators.size(); ++g)
        out.generators[g] = holonomy(h, phi.inverse_images[g]);
    const Mat2 rel = holonomy(out, G.relator()).mat();
    out.relator_residual = psl2_distance(rel, Mat2::identity());
    return out;
}

const std::vector<MappingClass>& library_mapping_classes() {
    static const std::vector<MappingClass> all = [] {
        const int genus = 2;
        auto W = [genus](const std::string& s) { return parse_word(s, genus); };
        std::vector<MappingClass> v;

        MappingClass ident{"id",
                           {W("a1"), W("b1"), W("a2"), W("b2")},
                           {W("a1"), W("b1"), W("a2"), W("b2")}};
        v.push_back(ident);

        // Dehn twists along the interior handle curves
        v.push_back({"Ta1",
                     {W("a1"), W("a1 b1"), W("a2"), W("b2")},
                     {W("a1"), W("A1 b1"), W("a2"), W("b2")}});
        v.push_back({"Tb1",
                     {W("a1 b1"), W("b1"), W("a2"), W("b2")},
                     {W("a1 B1"), W("b1"), W("a2"), W("b2")}});
        v.push_back({"Ta2",
                     {W("a1"), W("b1"), W("a2"), W("a2 b2")},
                     {W("a1"), W("b1"), W("a2"), W("A2 b2")}});
        v.push_back({"Tb2",
                     {W("a1"), W("b1"), W("a2 b2"), W("b2")},
                     {W("a1"), W("b1"), W("a2 B2"), W("b2")}});
        // Twist along the separating curve k = [a1, b1]
        v.push_back({"Tk",
                     {W("a1"), W("b1"), W("a1 b1 A1 B1 a2 b1 a1 B1 A1"),
                      W("a1 b1 A1 B1 b2 b1 a1 B1 A1")},
                     {W("a1"), W("b1"), W("b1 a1 B1 A1 a2 a1 b1 A1 B1"),
                      W("b1 a1 B1 A1 b2 a1 b1 A1 B1")}});
        return v;
    }();
    return all;
}

const MappingClass& mapping_class_by_name(const std::string& name) {
    for (const auto& m : library_mapping_classes())
        if (m.name == name) return m;
    throw range_error("unknown mapping class '" + name + "'");
}

const MarkedStructure& reference_structure() {
    static const MarkedStructure ref = [] {
        FNCoords fn;
        fn.lengths = {2.2, 2.45, 3.1};
        fn.twists = {0.35, -0.2, 0.55};
        return fn_to_holonomy(fn, decomposition_by_name("P_a_a"));
    }();
    return ref;
}

} // namespace ats::surf
