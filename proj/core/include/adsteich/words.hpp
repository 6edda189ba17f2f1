#pragma once

// Reduced words in the generators of a surface group. Letters are small
// signed integers: +k is generator k (1-based), -k its inverse.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "adsteich/errors.hpp"

namespace ats::surf {

using Letter = std::int8_t;
using Word = std::vector<Letter>;

Word reduce(Word w);
Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);
Word conjugate(const Word& g, const Word& w);  // g w g^-1
Word cyclic_reduce(Word w);
Word power(const Word& w, int n);

// True iff reduced(u) equals some cyclic rotation of reduced(v), i.e. the
// two words are conjugate as cyclically reduced words.
bool cyclically_equal(const Word& u, const Word& v);

// Exponent sums per generator.
std::vector<int> abelianize(const Word& w, int n_generators);

// Substitutes images[k-1] for generator k (and its inverse for -k).
Word substitute(const Word& w, const std::vector<Word>& images);

// Parse "a1 b1 A1 B1" style text: lowercase = generator, uppercase =
// inverse. Generator names are a1..a_g, b1..b_g.
Word parse_word(const std::string& text, int genus);
std::string word_to_string(const Word& w, int genus);

// Closed genus-g surface group with generators a1, b1, ..., a_g, b_g and
// the product-of-commutators relator.
struct SurfaceGroup {
    int genus = 2;

    explicit SurfaceGroup(int g = 2);

    int n_generators() const { return 2 * genus; }
    const Word& relator() const { return relator_; }

    // letters for the handle-h basis pair (a_h, b_h), h in [0, genus)
    Letter a(int h) const { return static_cast<Letter>(2 * h + 1); }
    Letter b(int h) const { return static_cast<Letter>(2 * h + 2); }

  private:
    Word relator_;
};

} // namespace ats::surf
