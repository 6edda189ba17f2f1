#include "adsteich/cover.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace ats::surf {

namespace {

using hyp::Boundary;
using hyp::Isometry;

// quantized key for deduplicating matrices / poles
struct QuantKey {
    std::int64_t v[3];
    bool operator==(const QuantKey& o) const {
        return v[0] == o.v[0] && v[1] == o.v[1] && v[2] == o.v[2];
    }
};

struct QuantKeyHash {
    size_t operator()(const QuantKey& k) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (int i = 0; i < 3; ++i) {
            h ^= static_cast<std::uint64_t>(k.v[i]);
            h *= 1099511628211ULL;
        }
        return static_cast<size_t>(h);
    }
};

struct Quad {
    std::int64_t v[4];
    bool operator==(const Quad& o) const {
        return v[0] == o.v[0] && v[1] == o.v[1] && v[2] == o.v[2] && v[3] == o.v[3];
    }
};
struct QuadHash {
    size_t operator()(const Quad& k) const {
        std::uint64_t h = 14695981039346656037ULL;
        for (int i = 0; i < 4; ++i) {
            h ^= static_cast<std::uint64_t>(k.v[i]);
            h *= 1099511628211ULL;
        }
        return static_cast<size_t>(h);
    }
};

Quad mat_key(const Mat2& m) {
    const Mat2 c = canonical_sign(m);
    const double q = 1e7;
    return {{std::llround(c.a * q), std::llround(c.b * q), std::llround(c.c * q),
             std::llround(c.d * q)}};
}

Vec3 canonical_pole(Vec3 p) {
    double m = std::abs(p.x);
    double lead = p.x;
    if (std::abs(p.y) > m) { m = std::abs(p.y); lead = p.y; }
    if (std::abs(p.z) > m) { lead = p.z; }
    return lead < 0.0 ? -p : p;
}

QuantKey pole_key(const Vec3& p) {
    const Vec3 c = canonical_pole(p);
    const double q = 1e6;
    return {{std::llround(c.x * q), std::llround(c.y * q), std::llround(c.z * q)}};
}

const Vec3 kBasePoint{0.0, 0.0, 1.0};  // hyperboloid image of i

Vec3 tile_point(const Mat2& m) {
    const hyp::HPoint p = hyp::apply(Isometry(m), hyp::HPoint(0.0, 1.0));
    return hyp::to_hyperboloid(p);
}

// axis-adapted coordinates of a point P relative to an AxisSegment frame:
// distance to the axis line and the foot parameter along it
void axis_coords(const AxisSegment& seg, const Vec3& P, double* dist, double* param) {
    *dist = std::asinh(std::abs(hyp::mink(P, seg.normal)));
    const double ct = -hyp::mink(P, seg.base);
    const double st = hyp::mink(P, seg.tangent);
    *param = std::atanh(std::max(-0.9999999999999, std::min(0.9999999999999, st / ct)));
}

bool window_crossing(const AxisSegment& seg, const Vec3& w, double* t_out) {
    const double fb = hyp::mink(seg.base, w);
    const double ft = hyp::mink(seg.tangent, w);
    if (std::abs(ft) <= std::abs(fb)) return false;
    const double t = std::atanh(-fb / ft);
    if (t < seg.t0 || t >= seg.t1) return false;
    if (t_out) *t_out = t;
    return true;
}

// Generic budgeted BFS over reduced words with a spatial keep-predicate.
template <typename Keep, typename Visit>
void letter_bfs(const std::array<Isometry, 4>& gens, int budget, Keep keep, Visit visit) {
    struct Node {
        Mat2 m;
        int last;
    };
    std::array<Mat2, 8> step;
    for (int i = 0; i < 4; ++i) {
        step[static_cast<size_t>(2 * i)] = gens[static_cast<size_t>(i)].mat();
        step[static_cast<size_t>(2 * i + 1)] = gens[static_cast<size_t>(i)].mat().inv_unit();
    }
    std::unordered_set<Quad, QuadHash> seen;
    std::vector<Node> frontier{{Mat2::identity(), -1}};
    seen.insert(mat_key(Mat2::identity()));
    visit(Mat2::identity());

    for (int depth = 1; depth <= budget && !frontier.empty(); ++depth) {
        std::vector<Node> next;
        next.reserve(frontier.size() * 4);
        for (const Node& n : frontier) {
            for (int i = 0; i < 8; ++i) {
                if (n.last >= 0 && i == (n.last ^ 1)) continue;
                Mat2 m = n.m * step[static_cast<size_t>(i)];
                if (!seen.insert(mat_key(m)).second) continue;
                if (!keep(m)) continue;
                visit(m);
                next.push_back({m, i});
            }
        }
        frontier = std::move(next);
    }
}

// Problem conjugated so that the axis of h(c) is the imaginary axis; the
// window starts at i. Everything the counting routines need lives here.
struct NormalizedFrame {
    std::array<Isometry, 4> gens;
    AxisSegment seg;   // fundamental window on the imaginary axis
    double length = 0; // translation length of c
};

Mat2 frame_conjugator(const MarkedStructure& h, const Word& c) {
    const Mat2 M = holonomy(h, c).mat();
    // reuse the eigenvector diagonalizer from the construction: build it here
    const double tr = M.trace();
    if (std::abs(tr) <= 2.0) throw classification_error("cover: curve image not hyperbolic");
    const double disc = std::sqrt(tr * tr - 4.0);
    const double l1 = tr >= 0 ? (tr + disc) / 2 : (tr - disc) / 2;  // attracting
    const double l2 = tr >= 0 ? (tr - disc) / 2 : (tr + disc) / 2;
    auto eigvec = [&M](double lambda, double& x, double& y) {
        const double n1 = std::hypot(M.b, lambda - M.a);
        const double n2 = std::hypot(lambda - M.d, M.c);
        if (n1 >= n2) { x = M.b / n1; y = (lambda - M.a) / n1; }
        else { x = (lambda - M.d) / n2; y = M.c / n2; }
    };
    double x1, y1, x2, y2;
    eigvec(l1, x1, y1);  // attracting -> infinity
    eigvec(l2, x2, y2);  // repelling  -> 0
    double det = x1 * y2 - x2 * y1;
    if (std::abs(det) < 1e-14) throw internal_error("cover: defective curve image");
    if (det < 0) { x2 = -x2; y2 = -y2; det = -det; }
    const double s = 1.0 / std::sqrt(det);
    // columns (attracting, repelling); inverse sends axis to (0, infinity)
    const Mat2 V{x1 * s, x2 * s, y1 * s, y2 * s};
    return V.inv_unit();
}

NormalizedFrame normalized_frame(const MarkedStructure& h, const Word& c) {
    NormalizedFrame f;
    const Mat2 Q = frame_conjugator(h, c);
    const Mat2 Qi = Q.inv_unit();
    for (size_t g = 0; g < 4; ++g)
        f.gens[g] = Isometry(Q * h.generators[g].mat() * Qi);
    MarkedStructure hn = h;
    hn.generators = f.gens;
    f.length = hyp::translation_length(holonomy(hn, c));
    f.seg.base = kBasePoint;          // i lies on the normalized axis
    f.seg.tangent = {0.0, 1.0, 0.0};  // towards the attracting end
    f.seg.normal = {-1.0, 0.0, 0.0};  // left normal of 0 -> infinity
    f.seg.t0 = 0.0137;                // dodge endpoint ties in the window
    f.seg.t1 = f.seg.t0 + f.length;
    return f;
}

// Distinct poles of conjugate axes of h(c2) that cross (or come within
// `reach` of) the window of the normalized frame.
std::vector<Vec3> axes_near_window(const NormalizedFrame& f, const Word& c2,
                                   double reach, int budget) {
    MarkedStructure hn;
    hn.generators = f.gens;
    const Isometry M2 = holonomy(hn, c2);
    const double len2 = hyp::translation_length(M2);
    const hyp::HLine ax2 = hyp::axis(M2);

    // stage 1: conjugate axes of c2 near the basepoint, one period's worth
    AxisSegment seg2;
    seg2.base = kBasePoint;  // only used to anchor coords; replace with foot
    {
        const double s = hyp::mink(kBasePoint, ax2.pole());
        seg2.base = (kBasePoint - ax2.pole() * s) * (1.0 / std::sqrt(1.0 + s * s));
        seg2.tangent = hyp::line_tangent_at(ax2, seg2.base);
        seg2.normal = ax2.pole();
        seg2.t0 = 0.0;
        seg2.t1 = 0.0;
    }
    const double d_base_axis = std::asinh(std::abs(hyp::mink(kBasePoint, ax2.pole())));
    const double r_strand = 3.0 + 0.12 * budget + d_base_axis;
    const double half_span = len2 / 2.0 + 2.0;

    std::vector<std::pair<Boundary, Boundary>> strand_ends;
    {
        std::unordered_set<QuantKey, QuantKeyHash> strand_poles;
        auto keep = [&](const Mat2& m) {
            double d, t;
            axis_coords(seg2, tile_point(m), &d, &t);
            return d <= r_strand && std::abs(t) <= half_span;
        };
        auto visit = [&](const Mat2& m) {
            const Isometry u(m.inv_unit());
            const Boundary p0 = hyp::apply(u, ax2.e0());
            const Boundary p1 = hyp::apply(u, ax2.e1());
            try {
                const hyp::HLine line(p0, p1);
                if (strand_poles.insert(pole_key(line.pole())).second)
                    strand_ends.emplace_back(p0, p1);
            } catch (const geom_error&) {
            }
        };
        letter_bfs(f.gens, budget, keep, visit);
    }

    // stage 2: tiles near the window
    std::vector<Isometry> window_tiles;
    {
        const double r_window = reach + 3.0 + 0.12 * budget;
        auto keep = [&](const Mat2& m) {
            double d, t;
            axis_coords(f.seg, tile_point(m), &d, &t);
            return d <= r_window && t >= f.seg.t0 - r_window && t <= f.seg.t1 + r_window;
        };
        auto visit = [&](const Mat2& m) { window_tiles.push_back(Isometry(m)); };
        letter_bfs(f.gens, budget, keep, visit);
    }

    // combine: w * strand axes, dedup by pole, keep those meeting the window
    const QuantKey self_key = pole_key(f.seg.normal);
    std::unordered_set<QuantKey, QuantKeyHash> emitted;
    std::vector<Vec3> out;
    for (const Isometry& w : window_tiles) {
        for (const auto& [q0, q1] : strand_ends) {
            const Boundary p0 = hyp::apply(w, q0);
            const Boundary p1 = hyp::apply(w, q1);
            try {
                const hyp::HLine line(p0, p1);
                const QuantKey key = pole_key(line.pole());
                if (key == self_key) continue;
                if (emitted.count(key)) continue;
                bool take = window_crossing(f.seg, line.pole(), nullptr);
                if (!take && reach > 0.0) {
                    // near-miss axes are needed for arc counting
                    double dmin = 1e300;
                    for (double t : {f.seg.t0, (f.seg.t0 + f.seg.t1) / 2, f.seg.t1}) {
                        const double v = std::abs(hyp::mink(f.seg.point(t), line.pole()));
                        dmin = std::min(dmin, std::asinh(v));
                    }
                    take = dmin <= reach;
                }
                if (take) {
                    emitted.insert(key);
                    out.push_back(canonical_pole(line.pole()));
                }
            } catch (const geom_error&) {
            }
        }
    }
    return out;
}

int crossing_count(const NormalizedFrame& f, const std::vector<Vec3>& axes) {
    int n = 0;
    for (const Vec3& w : axes)
        if (window_crossing(f.seg, w, nullptr)) ++n;
    return n;
}

} // namespace

AxisSegment fundamental_segment(const MarkedStructure& h, const Word& c) {
    const Isometry M = holonomy(h, c);
    const double len = hyp::translation_length(M);
    const hyp::HLine ax = hyp::axis(M);
    const double s = hyp::mink(kBasePoint, ax.pole());
    AxisSegment seg;
    seg.base = (kBasePoint - ax.pole() * s) * (1.0 / std::sqrt(1.0 + s * s));
    seg.tangent = hyp::line_tangent_at(ax, seg.base);
    seg.normal = ax.pole();
    seg.t0 = 0.0137;
    seg.t1 = seg.t0 + len;
    return seg;
}

std::vector<Vec3> conjugate_axes_near(const MarkedStructure& h, const Word& c,
                                      const AxisSegment& seg, double reach,
                                      int budget) {
    // public entry point counts in the caller's frame; normalize internally
    NormalizedFrame f = normalized_frame(h, c);
    f.seg.t0 = seg.t0;
    f.seg.t1 = seg.t1;
    return axes_near_window(f, c, reach, budget);
}

int geometric_intersection(const MarkedStructure& h, const Word& c1, const Word& c2,
                           int budget) {
    auto count_at = [&](int b) {
        const NormalizedFrame f = normalized_frame(h, c1);
        const std::vector<Vec3> axes = axes_near_window(f, c2, 0.0, b);
        return crossing_count(f, axes);
    };
    const int lo = count_at(budget - 2);
    const int hi = count_at(budget);
    if (lo != hi)
        throw budget_error("geometric_intersection: count did not stabilize at budget " +
                               std::to_string(budget),
                           hi);
    return hi;
}

int geometric_intersection(const CurveWord& c1, const CurveWord& c2, int budget) {
    return geometric_intersection(reference_structure(), c1.word, c2.word, budget);
}

int self_intersection(const MarkedStructure& h, const Word& c, int budget) {
    return geometric_intersection(h, c, c, budget);
}

int orthogonal_arc_hits(const MarkedStructure& h, const CurveWord& c, double s,
                        double alpha0, ArcSide side, int budget) {
    if (!(alpha0 > 0.0)) throw range_error("orthogonal_arc_hits: alpha0 must be > 0");
    NormalizedFrame f = normalized_frame(h, c.word);
    const double len = f.length;
    const double s_mod = s - len * std::floor(s / len);

    // enumerate near the sample point only
    AxisSegment window = f.seg;
    window.t0 = f.seg.t0 + s_mod - 0.05;
    window.t1 = f.seg.t0 + s_mod + 0.05;
    NormalizedFrame local = f;
    local.seg = window;
    const std::vector<Vec3> axes = axes_near_window(local, c.word, alpha0 + 0.15, budget);

    const Vec3 X = f.seg.point(f.seg.t0 + s_mod);
    const Vec3 N = f.seg.normal * (side == ArcSide::Left ? 1.0 : -1.0);
    int hits = 1;  // the starting point x lies on c
    for (const Vec3& w : axes) {
        const double f0 = hyp::mink(X, w);
        const double fn = hyp::mink(N, w);
        if (std::abs(fn) <= std::abs(f0)) continue;
        const double v = std::atanh(-f0 / fn);
        if (v > 1e-12 && v <= alpha0) ++hits;
    }
    return hits;
}

BadSetReport bad_set_measure(const MarkedStructure& h, const CurveWord& c,
                             double alpha0, double beta0, int samples,
                             std::uint64_t seed, int budget) {
    if (samples < 100) throw range_error("bad_set_measure: need samples >= 100");
    NormalizedFrame f = normalized_frame(h, c.word);
    const double len = f.length;

    // one enumeration pass over a tube around the whole window
    const std::vector<Vec3> axes = axes_near_window(f, c.word, alpha0 + 0.15, budget);

    auto hits_at = [&](double s, double dir) {
        const Vec3 X = f.seg.point(f.seg.t0 + s);
        const Vec3 N = f.seg.normal * dir;
        int n = 1;
        for (const Vec3& w : axes) {
            const double f0 = hyp::mink(X, w);
            const double fn = hyp::mink(N, w);
            if (std::abs(fn) <= std::abs(f0)) continue;
            const double v = std::atanh(-f0 / fn);
            if (v > 1e-12 && v <= alpha0) ++n;
        }
        return n;
    };

    Rng rng(seed);
    const double threshold = beta0 * len;
    int bad = 0, bad_l = 0, bad_r = 0;
    int min_count = 1 << 30, max_count = 0;
    for (int j = 0; j < samples; ++j) {
        const double s = (j + rng.uniform()) * len / samples;
        const int nl = hits_at(s, 1.0);
        const int nr = hits_at(s, -1.0);
        const int inf = std::min(nl, nr);
        min_count = std::min(min_count, inf);
        max_count = std::max(max_count, std::max(nl, nr));
        if (inf <= threshold) ++bad;
        if (nl <= threshold) ++bad_l;
        if (nr <= threshold) ++bad_r;
    }

    BadSetReport rep;
    rep.curve_length = len;
    rep.samples = samples;
    rep.fraction = static_cast<double>(bad) / samples;
    rep.fraction_left = static_cast<double>(bad_l) / samples;
    rep.fraction_right = static_cast<double>(bad_r) / samples;
    rep.measure = rep.fraction * len;
    const double p = rep.fraction;
    rep.two_sigma = 2.0 * len * std::sqrt(std::max(p * (1.0 - p), 1.0 / samples) / samples);
    rep.min_count = min_count;
    rep.max_count = max_count;
    return rep;
}

} // namespace ats::surf
