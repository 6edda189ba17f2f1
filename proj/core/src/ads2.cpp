#include "adsteich/ads2.hpp"

#include <algorithm>
#include <cmath>

namespace ats::ads2 {

namespace {
constexpr double kPi = 3.14159265358979323846;

// future-pointing test for a timelike tangent/pole direction p at any of
// its line's points: the (x0,x1)-plane rotation sense is the time
// orientation, and for a pole it reduces to a sign we can read off by
// parallel data; we store it via the band-time derivative below.
} // namespace

double form(const Vec3& u, const Vec3& v) {
    return -u.x * v.x - u.y * v.y + u.z * v.z;
}

AdS2Point::AdS2Point(const Vec3& x, double tol) : v(x) {
    if (std::abs(form(x, x) + 1.0) > tol)
        throw geom_error("AdS2Point: vector is not on the quadric");
}

double AdS2Point::time() const { return std::atan2(v.y, v.x); }
double AdS2Point::space() const { return std::asinh(v.z); }

namespace {

// The pole p is tangent to the quadric along its line; it is future-
// pointing iff it advances the band time t = atan2(x1, x0), i.e. iff
// x0 p1 - x1 p0 > 0 at a point x of the line. Any point works; build one
// by diagonalizing the form on pole^perp, which has signature (-,+).
Vec3 point_on_line(const Vec3& pole) {
    auto project = [&](Vec3 w) {
        const double c = form(w, pole) / form(pole, pole);
        return w - pole * c;
    };
    // two independent spanning vectors of the plane
    Vec3 e1 = project({1, 0, 0});
    Vec3 e2 = project({0, 1, 0});
    if (euclid_dot(euclid_cross(e1, e2), euclid_cross(e1, e2)) < 1e-16)
        e2 = project({0, 0, 1});
    const double g11 = form(e1, e1), g12 = form(e1, e2), g22 = form(e2, e2);
    // eigenvector of ((g11 g12),(g12 g22)) for the negative eigenvalue
    const double tr = g11 + g22;
    const double det = g11 * g22 - g12 * g12;
    const double lam = (tr - std::sqrt(std::max(0.0, tr * tr - 4.0 * det))) / 2.0;
    double a = g12, b = lam - g11;
    if (std::hypot(a, b) < 1e-12) { a = lam - g22; b = g12; }
    if (std::hypot(a, b) < 1e-12) { a = 1.0; b = 0.0; }
    const Vec3 f = e1 * a + e2 * b;
    const double ff = form(f, f);
    if (!(ff < 0)) throw internal_error("point_on_line: no timelike direction");
    return f * (1.0 / std::sqrt(-ff));
}

bool future_pointing(const Vec3& pole) {
    const Vec3 x = point_on_line(pole);
    return x.x * pole.y - x.y * pole.x > 0.0;
}

} // namespace

AdS2Line::AdS2Line(const Vec3& p, double tol) {
    const double n = form(p, p);
    if (!(n < 0.0)) throw geom_error("AdS2Line: pole must be timelike");
    pole = p * (1.0 / std::sqrt(-n));
    if (std::abs(form(pole, pole) + 1.0) > tol)
        throw internal_error("AdS2Line: normalization failed");
    if (!future_pointing(pole)) pole = -pole;
}

Separation lorentz_distance(const AdS2Point& p, const AdS2Point& q) {
    const double ip = form(p.v, q.v);
    Separation out;
    if (ip >= 1.0 - 1e-12)
        throw range_error("lorentz_distance: points not connected within one band");
    if (ip <= -1.0 - 1e-12) {
        out.kind = SeparationKind::Spacelike;
        out.value = std::acosh(-ip);
        return out;
    }
    if (ip >= -1.0 + 1e-12) {
        out.kind = SeparationKind::Timelike;
        out.value = std::acos(std::min(1.0, std::max(-1.0, -ip)));
        return out;
    }
    // ip ~ -1: coincident (timelike-degenerate) or lightlike related
    const Vec3 d = p.v - q.v;
    const double sep = std::abs(d.x) + std::abs(d.y) + std::abs(d.z);
    out.kind = sep < 1e-9 ? SeparationKind::Timelike : SeparationKind::Lightlike;
    out.value = 0.0;
    return out;
}

AdS2Line dual_line(const AdS2Point& x) { return AdS2Line(x.v); }

Mat3 random_isometry(Rng& rng, double scale) {
    // Lie algebra of the form group: A^T G + G A = 0, G = diag(-1,-1,1).
    // Basis: rotation in (0,1), boosts in (0,2) and (1,2).
    const double a = scale * rng.gaussian();
    const double b = scale * rng.gaussian();
    const double c = scale * rng.gaussian();
    const double A[3][3] = {{0, -a, b}, {a, 0, c}, {b, c, 0}};
    // exp by scaling and squaring with a short Taylor series
    double M[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    double T[3][3];
    const int squarings = 8;
    double S[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) S[i][j] = A[i][j] / 256.0;
    // exp(S) ~ I + S + S^2/2 + S^3/6 + S^4/24
    double P[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    double term[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int k = 1; k <= 6; ++k) {
        double nt[3][3] = {};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l) nt[i][j] += term[i][l] * S[l][j] / k;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                term[i][j] = nt[i][j];
                P[i][j] += nt[i][j];
            }
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) M[i][j] = P[i][j];
    for (int s = 0; s < squarings; ++s) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                T[i][j] = 0;
                for (int l = 0; l < 3; ++l) T[i][j] += M[i][l] * M[l][j];
            }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) M[i][j] = T[i][j];
    }
    Mat3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[static_cast<size_t>(i)][static_cast<size_t>(j)] = M[i][j];
    return out;
}

Vec3 apply(const Mat3& g, const Vec3& v) {
    return {g[0][0] * v.x + g[0][1] * v.y + g[0][2] * v.z,
            g[1][0] * v.x + g[1][1] * v.y + g[1][2] * v.z,
            g[2][0] * v.x + g[2][1] * v.y + g[2][2] * v.z};
}

// --------------------------------------------------------------- Prop 4

double line_angle(const AdS2Line& a, const AdS2Line& b) {
    return std::acosh(std::max(1.0, std::abs(form(a.pole, b.pole))));
}

ConvexConfig build_config(double alpha0, double phi_l, double phi_r) {
    if (!(alpha0 > 0.0)) throw range_error("build_config: alpha0 must be > 0");
    if (!(phi_l > 0.0) || !(phi_r > 0.0))
        throw range_error("build_config: angles must be > 0");

    ConvexConfig cfg;
    cfg.alpha0 = alpha0;
    cfg.phi_l = phi_l;
    cfg.phi_r = phi_r;
    cfg.x = AdS2Point({1.0, 0.0, 0.0});

    const Vec3 p{0.0, 1.0, 0.0};  // future normal of Pi_x at x
    cfg.Pi_x = AdS2Line(p);

    // contact points and unit tangents of Pi_x at spacelike distance alpha0
    const double ca = std::cosh(alpha0), sa = std::sinh(alpha0);
    const Vec3 xr{ca, 0.0, sa};
    const Vec3 xl{ca, 0.0, -sa};
    const Vec3 ur{sa, 0.0, ca};   // tangent at xr, pointing away from x
    const Vec3 ul{-sa, 0.0, ca};  // tangent at xl (z-component continues left)

    // support lines tilted so the convex side (past of Pi_x) stays below
    const Vec3 qr = p * std::cosh(phi_r) - ur * std::sinh(phi_r);
    const Vec3 ql = p * std::cosh(phi_l) + ul * std::sinh(phi_l);
    cfg.P_r = AdS2Line(qr);
    cfg.P_l = AdS2Line(ql);

    // past ideal endpoints of the support lines
    const Vec3 vr = ur * std::cosh(phi_r) - p * std::sinh(phi_r);  // direction of P_r at xr
    const Vec3 vl = ul * std::cosh(phi_l) + p * std::sinh(phi_l);
    const Vec3 nr = xr + vr;  // <p, vr> = sinh(phi_r) > 0: past side
    const Vec3 nl = xl - vl;

    // line through the two null directions
    const Vec3 G_cross = [&] {
        const Vec3 e = euclid_cross(nl, nr);
        return Vec3{-e.x, -e.y, e.z};  // G-dual with G = diag(-1,-1,1)
    }();
    if (!(form(G_cross, G_cross) < -1e-14))
        throw geom_error("build_config: Pi' is not spacelike for these parameters");
    cfg.Pi_prime = AdS2Line(G_cross);
    return cfg;
}

double tau_core_length(const ConvexConfig& cfg) {
    // tau(t) = cos(t) x - sin(t) p walks from x into the past; exit through
    // Pi' at tan(t*) = <q', x>/<q', p> with q' the future-pointing pole.
    const Vec3& q = cfg.Pi_prime.pole;
    const Vec3 p{0.0, 1.0, 0.0};
    const double num = form(q, cfg.x.v);
    const double den = form(q, p);
    if (std::abs(den) < 1e-300)
        throw internal_error("tau_core_length: tau parallel to Pi'");
    const double ratio = num / den;
    if (!(ratio > 0.0))
        throw internal_error("tau_core_length: tau does not exit through Pi'");
    return std::atan(ratio);
}

// --------------------------------------------------------------- polylines

double polyline_length(const SpacelikePolyline& s) {
    if (s.vertices.size() < 2)
        throw geom_error("polyline_length: need at least two vertices");
    double total = 0;
    for (size_t i = 0; i + 1 < s.vertices.size(); ++i) {
        const Separation sep = lorentz_distance(s.vertices[i], s.vertices[i + 1]);
        if (sep.kind != SeparationKind::Spacelike)
            throw geom_error("polyline_length: consecutive vertices not spacelike-separated");
        total += sep.value;
    }
    return total;
}

namespace {

double turn(const AdS2Point& a, const AdS2Point& b, const AdS2Point& c) {
    return det3(a.v, b.v, c.v);
}

} // namespace

bool is_future_convex(const SpacelikePolyline& s, double tol) {
    for (size_t i = 0; i + 2 < s.vertices.size(); ++i)
        if (turn(s.vertices[i], s.vertices[i + 1], s.vertices[i + 2]) < -tol) return false;
    return true;
}

NestedCompare nested_arc_compare(const SpacelikePolyline& sigma0,
                                 const SpacelikePolyline& sigma1) {
    if (sigma0.vertices.size() < 2 || sigma1.vertices.size() < 2)
        throw geom_error("nested_arc_compare: degenerate polyline");
    const auto close = [](const Vec3& a, const Vec3& b) {
        return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z) < 1e-9;
    };
    if (!close(sigma0.vertices.front().v, sigma1.vertices.front().v) ||
        !close(sigma0.vertices.back().v, sigma1.vertices.back().v))
        throw geom_error("nested_arc_compare: endpoint mismatch");
    if (!is_future_convex(sigma0) || !is_future_convex(sigma1))
        throw geom_error("nested_arc_compare: arcs must be future convex");

    // nesting: sample band-time of sigma0 against sigma1 at shared s values
    auto band_time_at = [](const SpacelikePolyline& poly, double s) {
        for (size_t i = 0; i + 1 < poly.vertices.size(); ++i) {
            const double s0 = poly.vertices[i].space();
            const double s1 = poly.vertices[i + 1].space();
            if (s < std::min(s0, s1) - 1e-12 || s > std::max(s0, s1) + 1e-12) continue;
            const double u = std::abs(s1 - s0) < 1e-15 ? 0.0 : (s - s0) / (s1 - s0);
            // geodesic interpolation in the ambient quadric
            const Vec3 a = poly.vertices[i].v, b = poly.vertices[i + 1].v;
            const double d = std::acosh(std::max(1.0, -form(a, b)));
            Vec3 pt;
            if (d < 1e-12) {
                pt = a;
            } else {
                const double wa = std::sinh((1 - u) * d) / std::sinh(d);
                const double wb = std::sinh(u * d) / std::sinh(d);
                pt = a * wa + b * wb;
            }
            return std::atan2(pt.y, pt.x);
        }
        throw internal_error("nested_arc_compare: sample outside polyline range");
    };

    const double s_lo = sigma0.vertices.front().space();
    const double s_hi = sigma0.vertices.back().space();
    for (int k = 1; k < 40; ++k) {
        const double s = s_lo + (s_hi - s_lo) * k / 40.0;
        if (band_time_at(sigma0, s) < band_time_at(sigma1, s) - 1e-9)
            throw geom_error("nested_arc_compare: sigma0 is not in the future of sigma1");
    }

    NestedCompare out;
    out.length_outer = polyline_length(sigma0);
    out.length_inner = polyline_length(sigma1);
    out.ok = out.length_outer >= out.length_inner - 1e-10;
    return out;
}

std::pair<SpacelikePolyline, SpacelikePolyline> random_nested_pair(Rng& rng,
                                                                   int max_vertices) {
    // random future-convex graph over s-knots: each segment extends the
    // previous one by bending weakly toward the future
    const int n = 3 + rng.uniform_int(0, std::max(0, max_vertices - 3));
    const double S = 1.2 + 0.8 * rng.uniform();
    std::vector<double> knots(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) knots[static_cast<size_t>(i)] = -S + 2.0 * S * i / (n - 1);

    auto point_at = [](double t, double s) {
        return AdS2Point({std::cos(t) * std::cosh(s), std::sin(t) * std::cosh(s),
                          std::sinh(s)});
    };

    SpacelikePolyline sigma0;
    // build by convex hull of random-time samples so convexity is automatic
    std::vector<AdS2Point> cloud;
    for (int i = 0; i < n; ++i) {
        const double margin = 0.35 / std::cosh(knots[static_cast<size_t>(i)]);
        const double t = (i == 0 || i == n - 1) ? 0.0 : rng.uniform(-margin, margin);
        cloud.push_back(point_at(t, knots[static_cast<size_t>(i)]));
    }
    // upper (future) convex hull over the s-sorted cloud
    std::vector<AdS2Point> hull;
    for (const AdS2Point& pt : cloud) {
        while (hull.size() >= 2 &&
               turn(hull[hull.size() - 2], hull[hull.size() - 1], pt) < 1e-14)
            hull.pop_back();
        hull.push_back(pt);
    }
    sigma0.vertices = hull;

    // sigma1: hull of a subset containing the endpoints -> nested past-ward
    SpacelikePolyline sigma1;
    std::vector<AdS2Point> sub;
    sub.push_back(sigma0.vertices.front());
    for (size_t i = 1; i + 1 < sigma0.vertices.size(); ++i)
        if (rng.coin()) sub.push_back(sigma0.vertices[i]);
    sub.push_back(sigma0.vertices.back());
    std::vector<AdS2Point> hull1;
    for (const AdS2Point& pt : sub) {
        while (hull1.size() >= 2 &&
               turn(hull1[hull1.size() - 2], hull1[hull1.size() - 1], pt) < 1e-14)
            hull1.pop_back();
        hull1.push_back(pt);
    }
    sigma1.vertices = hull1;
    return {sigma0, sigma1};
}

double equidistant_length_factor(double d) {
    if (!(d > 0.0 && d < kPi / 2.0))
        throw range_error("equidistant_length_factor: d must be in (0, pi/2)");
    return std::cos(d);
}

} // namespace ats::ads2
