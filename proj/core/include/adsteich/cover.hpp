#pragma once

// Universal-cover enumeration for a marked genus-2 structure: translates of
// a closed geodesic's axis near a region, geometric intersection counting,
// orthogonal-arc hit counts and the bad-set statistics built on them.
//
// All counts are budgeted: `budget` caps the reduced word length of the
// group elements visited. Callers that need a trusted count run two budgets
// and demand agreement.

#include <cstdint>
#include <vector>

#include "adsteich/surface.hpp"

namespace ats::surf {

inline constexpr int kDefaultBudget = 12;

// Oriented geodesic segment on the axis of a hyperbolic isometry, given by
// the hyperboloid basepoint (foot of i on the axis), the unit tangent and
// the arclength window [t0, t1).
struct AxisSegment {
    Vec3 base;     // point on the axis, <base,base> = -1
    Vec3 tangent;  // unit spacelike, tangent to the axis
    Vec3 normal;   // axis pole (left normal)
    double t0 = 0, t1 = 0;

    Vec3 point(double t) const {
        return base * std::cosh(t) + tangent * std::sinh(t);
    }
};

// Fundamental window [0, len(c)) of the axis of h(c).
AxisSegment fundamental_segment(const MarkedStructure& h, const Word& c);

// Distinct axes of conjugates g c g^-1 passing within `reach` of the
// segment window (self axis excluded). Poles are unit spacelike vectors in
// canonical sign.
std::vector<Vec3> conjugate_axes_near(const MarkedStructure& h, const Word& c,
                                      const AxisSegment& seg, double reach,
                                      int budget = kDefaultBudget);

// Geometric intersection number of two curves, computed by counting
// distinct conjugate axes of c2 crossing a fundamental segment of c1.
// Runs the count at `budget` and `budget - 2`; throws budget_error with the
// partial count when the two disagree.
int geometric_intersection(const MarkedStructure& h, const Word& c1, const Word& c2,
                           int budget = kDefaultBudget);
int geometric_intersection(const CurveWord& c1, const CurveWord& c2,
                           int budget = kDefaultBudget);

// Self-intersection count of the geodesic representative (0 for simple
// curves); same two-budget contract.
int self_intersection(const MarkedStructure& h, const Word& c,
                      int budget = kDefaultBudget);

enum class ArcSide { Left, Right };

// Number of intersections of the geodesic arc of length alpha0 leaving
// c(s) orthogonally to the given side with c itself, counting the starting
// point; always >= 1.
int orthogonal_arc_hits(const MarkedStructure& h, const CurveWord& c, double s,
                        double alpha0, ArcSide side, int budget = kDefaultBudget);

struct BadSetReport {
    double curve_length = 0;
    double measure = 0;        // estimated length of the bad set
    double fraction = 0;       // measure / curve_length
    double two_sigma = 0;      // binomial two-sigma of `measure`
    double fraction_left = 0;  // one-sided variants (n_l only / n_r only)
    double fraction_right = 0;
    int samples = 0;
    int min_count = 0;         // smallest inf(n_l, n_r) seen
    int max_count = 0;
};

// Stratified estimate of l({x in c : inf(n_l, n_r) <= beta0 l(c)}).
BadSetReport bad_set_measure(const MarkedStructure& h, const CurveWord& c,
                             double alpha0, double beta0, int samples,
                             std::uint64_t seed, int budget = kDefaultBudget);

} // namespace ats::surf
