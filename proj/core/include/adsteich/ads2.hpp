#pragma once

// The anti-de Sitter plane as the quadric <x,x> = -1 in R^{1,2} with
//   <x, y> = -x0 y0 - x1 y1 + x2 y2.
// Spacelike geodesics are cut out by timelike poles: L = {y : <p,y> = 0}
// with <p,p> = -1, which makes point/line duality the identity map. Poles
// are stored future-pointing, so the causal future of a line is the side
// where <p, .> < 0.
//
// In band coordinates x = (cos t cosh s, sin t cosh s, sinh s) the time
// function is t; everything here stays inside one band |t| < pi, asserted
// by range checks.

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "adsteich/errors.hpp"
#include "adsteich/linalg.hpp"
#include "adsteich/rng.hpp"

namespace ats::ads2 {

double form(const Vec3& u, const Vec3& v);  // -u0 v0 - u1 v1 + u2 v2

struct AdS2Point {
    Vec3 v{1.0, 0.0, 0.0};
    AdS2Point() = default;
    explicit AdS2Point(const Vec3& x, double tol = 1e-12);

    double time() const;   // band coordinate t = atan2(x1, x0)
    double space() const;  // band coordinate s = asinh(x2)
};

// Spacelike geodesic with unit timelike pole, stored future-pointing.
struct AdS2Line {
    Vec3 pole{0.0, 1.0, 0.0};
    AdS2Line() = default;
    explicit AdS2Line(const Vec3& p, double tol = 1e-10);

    // signed side: negative in the causal future of the line
    double side(const AdS2Point& x) const { return form(pole, x.v); }
};

enum class SeparationKind { Timelike, Spacelike, Lightlike };

struct Separation {
    SeparationKind kind = SeparationKind::Timelike;
    double value = 0;
};

// Timelike pairs: arccos(-<p,q>) in [0, pi]. Spacelike: arccosh(-<p,q>).
// Lightlike: 0 with the kind marker. Pairs with <p,q> >= 1 have no
// connecting geodesic in the band and raise range_error.
Separation lorentz_distance(const AdS2Point& p, const AdS2Point& q);

// The spacelike geodesic at timelike distance pi/2 from x.
AdS2Line dual_line(const AdS2Point& x);

// Isometries for property tests: exp of random Lie-algebra elements of the
// form-preserving group, orientation and time-orientation preserving.
using Mat3 = std::array<std::array<double, 3>, 3>;
Mat3 random_isometry(Rng& rng, double scale = 1.0);
Vec3 apply(const Mat3& g, const Vec3& v);

// ------------------------------------------------------------ Prop-4 data

// Convex-core cross-section data: support line Pi_x at the basepoint x,
// support lines P_l, P_r meeting Pi_x at spacelike distance alpha0 on
// either side with hyperbolic angle parameters phi_l, phi_r, and the line
// Pi' through the past ideal endpoints of P_l and P_r.
struct ConvexConfig {
    double alpha0 = 0;
    double phi_l = 0, phi_r = 0;
    AdS2Point x;
    AdS2Line Pi_x, P_l, P_r, Pi_prime;
};

// Throws geom_error when the angle/offset combination makes Pi' non-
// spacelike.
ConvexConfig build_config(double alpha0, double phi_l, double phi_r);

// Angle parameter between two spacelike lines: arccosh(|<p1,p2>|).
double line_angle(const AdS2Line& a, const AdS2Line& b);

// Length of the timelike geodesic orthogonal to Pi_x at x from x to its
// exit through Pi'; the lower-bound surrogate for the core crossing, and
// always < pi/2.
double tau_core_length(const ConvexConfig& cfg);

// --------------------------------------------------------------- polylines

struct SpacelikePolyline {
    std::vector<AdS2Point> vertices;
};

double polyline_length(const SpacelikePolyline& s);

// Discrete future-convexity via the turning determinant at each interior
// vertex.
bool is_future_convex(const SpacelikePolyline& s, double tol = 1e-12);

struct NestedCompare {
    bool ok = false;
    double length_outer = 0;  // sigma0, the future curve
    double length_inner = 0;  // sigma1
};

// Checks endpoints, convexity and nesting (sigma0 in the causal future of
// sigma1, sampled), then compares lengths: ok iff l(sigma0) >= l(sigma1) -
// 1e-10.
NestedCompare nested_arc_compare(const SpacelikePolyline& sigma0,
                                 const SpacelikePolyline& sigma1);

// Random nested pair with shared endpoints: sigma0 a random future-convex
// polyline, sigma1 the future-convex hull of a vertex subset; nesting holds
// by construction.
std::pair<SpacelikePolyline, SpacelikePolyline> random_nested_pair(Rng& rng,
                                                                   int max_vertices = 9);

// cos(d): the length contraction factor of the equidistant curve at
// timelike distance d in the past of a spacelike geodesic, d in (0, pi/2).
double equidistant_length_factor(double d);

} // namespace ats::ads2
