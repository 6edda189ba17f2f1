#pragma once

// Hyperbolic plane numerics in the upper half-plane model.
//
// Lines are stored by their ideal endpoints; internally most predicates go
// through the hyperboloid model in R^{2,1} with the form
//   <u, v> = u.x v.x + u.y v.y - u.z v.z,
// where a geodesic becomes a unit spacelike pole vector and point/line
// incidence, sides, distances and angles are all one-line formulas.

#include <optional>
#include <string>
#include <utility>

#include "adsteich/errors.hpp"
#include "adsteich/linalg.hpp"
#include "adsteich/rng.hpp"

namespace ats::hyp {

inline constexpr double kDefaultTol = 1e-9;

// ------------------------------------------------------------------ types

enum class IsometryKind { Hyperbolic, Parabolic, Elliptic, Identity };

// Element of PSL2(R): unit-determinant matrix in canonical sign.
class Isometry {
  public:
    Isometry() = default;
    explicit Isometry(const Mat2& m, double det_tol = 1e-12);

    const Mat2& mat() const { return m_; }
    double trace() const { return m_.trace(); }

    Isometry operator*(const Isometry& o) const;
    Isometry inverse() const;

    static Isometry translation_along_imaginary_axis(double length) {
        return Isometry(Mat2::diag(std::exp(length / 2), std::exp(-length / 2)));
    }

  private:
    Mat2 m_ = Mat2::identity();
};

IsometryKind classify(const Isometry& g, double tol = kDefaultTol);

// Point of the upper half-plane, im > 0.
struct HPoint {
    double re = 0, im = 1;
    HPoint() = default;
    HPoint(double r, double i);
};

// Ideal boundary point: a real number or the point at infinity.
struct Boundary {
    double x = 0;
    bool at_infinity = false;

    static Boundary infinity() { return {0.0, true}; }
    static Boundary real(double v) { return {v, false}; }
};

// Oriented geodesic with distinct ideal endpoints, oriented e0 -> e1.
// The pole is the unit spacelike normal pointing to the LEFT of the
// oriented line; side(p) > 0 means p lies on the left.
class HLine {
  public:
    HLine(Boundary e0, Boundary e1);
    static HLine imaginary_axis() {
        return HLine(Boundary::real(0.0), Boundary::infinity());
    }

    const Boundary& e0() const { return e0_; }
    const Boundary& e1() const { return e1_; }
    const Vec3& pole() const { return pole_; }

    HLine reversed() const { return HLine(e1_, e0_); }

  private:
    Boundary e0_, e1_;
    Vec3 pole_;
};

// ------------------------------------------------- model transport helpers

double mink(const Vec3& u, const Vec3& v);       // x x' + y y' - z z'
Vec3 mink_cross(const Vec3& u, const Vec3& v);   // <-orthogonal to both
Vec3 to_hyperboloid(const HPoint& p);
HPoint from_hyperboloid(const Vec3& v);
Vec3 ideal_vector(const Boundary& b);            // lightlike ray representative

// Unit tangent to `line` at the on-line point P, pointing along the
// orientation e0 -> e1.
Vec3 line_tangent_at(const HLine& line, const Vec3& P);

// ----------------------------------------------------------- group action

HPoint apply(const Isometry& g, const HPoint& p);
Boundary apply(const Isometry& g, const Boundary& b);
HLine apply(const Isometry& g, const HLine& line);

// Axis of a hyperbolic isometry, oriented by the translation direction
// (e1 = attracting fixed point).
HLine axis(const Isometry& g);

// ------------------------------------------------------------- operations

// 2 arccosh(|tr|/2); throws classification_error for non-hyperbolic input,
// naming the actual type.
double translation_length(const Isometry& g, double tol = kDefaultTol);

double point_distance(const HPoint& p, const HPoint& q);
double point_line_distance(const HPoint& p, const HLine& line);

// Signed side of the line: > 0 left, < 0 right, ~0 on the line.
double side(const HLine& line, const HPoint& p);

// 0 if the lines intersect or coincide, otherwise the distance realized on
// the common perpendicular.
double line_distance(const HLine& a, const HLine& b);

bool lines_disjoint(const HLine& a, const HLine& b, double margin = kDefaultTol);

struct Perpendicular {
    HPoint foot;
    double length = 0;
    double angle_at_foot = 0;  // always pi/2 up to rounding
    bool degenerate = false;   // x was on the line
};

Perpendicular drop_perpendicular(const HPoint& x, const HLine& line,
                                 double tol = kDefaultTol);

// Angle in (0, pi) at the common point `at` between the oriented line and
// the geodesic from `at` towards `to`.
double angle_between(const HLine& line, const HPoint& at, const HPoint& to);

// |cosh(l(c0)) sin(theta0) - cosh(d(D, D0))| for x on D, c0 the
// perpendicular from x to D0, theta0 the angle at x between D and c0.
// Exact configurations give residual < 1e-10.
double sublemma_identity_residual(const HLine& D, const HLine& D0,
                                  const HPoint& x, double tol = kDefaultTol);

// True iff the orthogonal segment of length alpha0 from D0 through x
// reaches D1. gamma0 is carried along for contract checking by sweeps; the
// geometric result does not depend on it.
bool sublemma_predicate(const HLine& D0, const HLine& D1, const HPoint& x,
                        double alpha0, double gamma0 = 0.0);

// ------------------------------------------------------- random samplers

struct IdentityConfig {
    HLine D;
    HLine D0;
    HPoint x;  // on D
    IdentityConfig(HLine d, HLine d0, HPoint p)
        : D(std::move(d)), D0(std::move(d0)), x(p) {}
};

// Random (D, D0, x on D) with D, D0 disjoint; for identity-residual tests.
IdentityConfig random_identity_config(Rng& rng);

struct PredicateConfig {
    HLine D0;
    HLine D1;
    HPoint x;  // strictly between the lines
    double d0 = 0, d1 = 0;
    PredicateConfig(HLine a, HLine b, HPoint p, double da, double db)
        : D0(std::move(a)), D1(std::move(b)), x(p), d0(da), d1(db) {}
};

// Random disjoint pair with x between them, d(x, D0) <= gamma and
// d(x, D1) <= gamma.
PredicateConfig random_predicate_config(Rng& rng, double gamma);

// ------------------------------------------------------------ calibration

struct Calibration {
    double gamma0 = 0;          // largest all-pass gamma on the grid
    double max_angle_dev = 0;   // max |pi/2 - theta0| seen at gamma0
    int samples_per_step = 0;
};

// Sweeps gamma downward over a grid and returns the largest value for
// which `samples` random valid configurations all satisfy the predicate.
Calibration calibrate_gamma0(double alpha0, int samples, std::uint64_t seed,
                             int grid_steps = 64);

} // namespace ats::hyp
