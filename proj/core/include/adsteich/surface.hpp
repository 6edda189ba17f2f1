#pragma once

// Closed genus-2 surface groups: curves, Fenchel-Nielsen charts, holonomy
// construction and length functions.
//
// The shipped decompositions are of handle type: the surface is two
// one-holed tori glued along the separating curve k = [a1,b1]. A chart
// picks one interior curve per handle (slope a, b or ab); its FN
// coordinates are (length of handle-1 curve, length of handle-2 curve,
// length of k) plus the three twists, all in hyperbolic length units.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adsteich/hyp.hpp"
#include "adsteich/words.hpp"

namespace ats::surf {

// ------------------------------------------------------------------ curves

struct CurveWord {
    std::string name;
    Word word;              // cyclically reduced
    bool simple = false;     // curated flag
    bool separating = false; // curated flag
};

struct WeightedCurve {
    CurveWord curve;
    double weight = 1.0;
};

struct Multicurve {
    std::vector<WeightedCurve> components;
    bool empty() const { return components.empty(); }
};

// Curated curve data plus the hand-checked geometric intersection table.
class CurveLibrary {
  public:
    int version = 0;
    int genus = 2;

    const std::vector<CurveWord>& curves() const { return curves_; }
    const CurveWord& curve(const std::string& name) const;
    bool has_curve(const std::string& name) const;

    // Curated geometric intersection number; throws if the pair is not in
    // the table.
    int table_intersection(const std::string& c1, const std::string& c2) const;

    // Curves used as the default filling family for spectrum comparisons.
    std::vector<CurveWord> filling_family() const;

    static CurveLibrary parse(const std::string& text);

    void add_curve(CurveWord c) { curves_.push_back(std::move(c)); }
    void set_intersection(const std::string& a, const std::string& b, int v);

  private:
    std::vector<CurveWord> curves_;
    std::map<std::pair<std::string, std::string>, int> table_;
};

// Built-in copy of data/curves_genus2.txt.
const CurveLibrary& genus2_library();
const std::string& genus2_library_text();

// ------------------------------------------------------------------ charts

enum class HandleSlope { A, B, AB };

std::string slope_name(HandleSlope s);

// Handle-type pants decomposition for genus 2: one interior curve per
// handle plus the separating curve. Cutting along all three curves yields
// two pairs of pants; pants h has boundary (c_h, c_h, k).
struct PantsDecomposition {
    std::string name;
    std::array<HandleSlope, 2> slopes{HandleSlope::A, HandleSlope::A};
    std::array<CurveWord, 3> curves;  // handle-1 curve, handle-2 curve, k

    // curve index touching each pants piece: {pants0: {0,0,2}, pants1: {1,1,2}}
    static constexpr std::array<std::array<int, 3>, 2> gluing{{{0, 0, 2}, {1, 1, 2}}};
};

PantsDecomposition make_decomposition(HandleSlope h1, HandleSlope h2);
const std::vector<PantsDecomposition>& library_decompositions();
const PantsDecomposition& decomposition_by_name(const std::string& name);

// Length/twist chart values for a fixed decomposition (hyperbolic length
// units for both).
struct FNCoords {
    std::array<double, 3> lengths{2.0, 2.0, 2.0};
    std::array<double, 3> twists{0.0, 0.0, 0.0};
};

// ----------------------------------------------------------- marked points

// A point of Teichmueller space: holonomy images of the surface-group
// generators a1, b1, a2, b2.
struct MarkedStructure {
    std::array<hyp::Isometry, 4> generators;
    int genus = 2;
    std::string decomposition;    // reference chart name
    double relator_residual = 0;  // psl2 distance of the relator image to id
};

hyp::Isometry holonomy(const MarkedStructure& h, const Word& w);

// Right-angled-hexagon style construction through the handle charts:
// exact relator, exact pants-curve lengths. Lengths above 50 are rejected.
MarkedStructure fn_to_holonomy(const FNCoords& fn, const PantsDecomposition& P);

// Inverse chart map. Lengths are read from traces; twists are recovered by
// closed-form trace inversion plus a 1-D solve for the separating twist,
// seeded by `seed` (continuation) when given.
FNCoords holonomy_to_fn(const MarkedStructure& h, const PantsDecomposition& P,
                        const FNCoords* seed = nullptr);

namespace detail {
// Construction without the library-curve hyperbolicity spot check; used by
// inner solver loops that rebuild thousands of trial structures.
MarkedStructure fn_to_holonomy_unchecked(const FNCoords& fn, const PantsDecomposition& P);
} // namespace detail

// ----------------------------------------------------------------- lengths

double curve_length(const MarkedStructure& h, const CurveWord& c);
double curve_length(const MarkedStructure& h, const Word& w);
double multicurve_length(const MarkedStructure& h, const Multicurve& mc);

// Throws geom_error unless weights are positive, components distinct, and
// the curated table gives pairwise intersection zero.
void validate_multicurve(const Multicurve& mc, const CurveLibrary& lib);

// --------------------------------------------------------- mapping classes

struct MappingClass {
    std::string name;
    std::vector<Word> images;          // images of a1, b1, a2, b2
    std::vector<Word> inverse_images;  // images under the inverse class
};

// relator image must be a conjugate of the relator or its inverse
bool preserves_relator(const MappingClass& phi, const SurfaceGroup& G);

// Pullback action: (phi . h)(w) = h(phi^{-1}(w)).
MarkedStructure apply_mapping_class(const MarkedStructure& h, const MappingClass& phi);

const std::vector<MappingClass>& library_mapping_classes();
const MappingClass& mapping_class_by_name(const std::string& name);

// Reference structure used for curve-library geometry (generic twists so
// that no accidental symmetry hides table errors).
const MarkedStructure& reference_structure();

} // namespace ats::surf
