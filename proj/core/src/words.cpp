#include "adsteich/words.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ats::surf {

Word reduce(Word w) {
    Word out;
    out.reserve(w.size());
    for (Letter l : w) {
        if (l == 0) throw geom_error("word contains null letter");
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

Word inverse(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (Letter& l : out) l = static_cast<Letter>(-l);
    return out;
}

Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return reduce(std::move(out));
}

Word conjugate(const Word& g, const Word& w) {
    return concat(concat(g, w), inverse(g));
}

Word cyclic_reduce(Word w) {
    w = reduce(std::move(w));
    while (w.size() >= 2 && w.front() == -w.back()) {
        w.erase(w.begin());
        w.pop_back();
    }
    return w;
}

Word power(const Word& w, int n) {
    Word out;
    const Word base = n >= 0 ? w : inverse(w);
    for (int i = 0; i < std::abs(n); ++i) out = concat(out, base);
    return out;
}

bool cyclically_equal(const Word& u, const Word& v) {
    const Word cu = cyclic_reduce(u);
    const Word cv = cyclic_reduce(v);
    if (cu.size() != cv.size()) return false;
    if (cu.empty()) return true;
    for (size_t shift = 0; shift < cv.size(); ++shift) {
        bool same = true;
        for (size_t i = 0; i < cu.size() && same; ++i)
            same = cu[i] == cv[(i + shift) % cv.size()];
        if (same) return true;
    }
    return false;
}

std::vector<int> abelianize(const Word& w, int n_generators) {
    std::vector<int> e(static_cast<size_t>(n_generators), 0);
    for (Letter l : w) {
        const int g = std::abs(l) - 1;
        if (g >= n_generators) throw geom_error("letter outside generator range");
        e[static_cast<size_t>(g)] += l > 0 ? 1 : -1;
    }
    return e;
}

Word substitute(const Word& w, const std::vector<Word>& images) {
    Word out;
    for (Letter l : w) {
        const size_t g = static_cast<size_t>(std::abs(l)) - 1;
        if (g >= images.size()) throw geom_error("substitute: letter outside image table");
        const Word& im = l > 0 ? images[g] : inverse(images[g]);
        out.insert(out.end(), im.begin(), im.end());
    }
    return reduce(std::move(out));
}

Word parse_word(const std::string& text, int genus) {
    Word w;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        if (tok.size() < 2) throw validation_error("word", "bad token '" + tok + "'");
        const char c = tok[0];
        const int idx = std::stoi(tok.substr(1));
        if (idx < 1 || idx > genus)
            throw validation_error("word", "handle index out of range in '" + tok + "'");
        Letter l = 0;
        switch (c) {
            case 'a': l = static_cast<Letter>(2 * (idx - 1) + 1); break;
            case 'b': l = static_cast<Letter>(2 * (idx - 1) + 2); break;
            case 'A': l = static_cast<Letter>(-(2 * (idx - 1) + 1)); break;
            case 'B': l = static_cast<Letter>(-(2 * (idx - 1) + 2)); break;
            default: throw validation_error("word", "bad generator '" + tok + "'");
        }
        w.push_back(l);
    }
    return reduce(std::move(w));
}

std::string word_to_string(const Word& w, int genus) {
    (void)genus;
    std::string out;
    for (Letter l : w) {
        if (!out.empty()) out += ' ';
        const int g = std::abs(l) - 1;
        const char base = (g % 2 == 0) ? 'a' : 'b';
        out += l > 0 ? base : static_cast<char>(std::toupper(base));
        out += std::to_string(g / 2 + 1);
    }
    return out;
}

SurfaceGroup::SurfaceGroup(int g) : genus(g) {
    if (g < 2) throw range_error("SurfaceGroup: genus must be >= 2");
    for (int h = 0; h < g; ++h) {
        const Letter ah = a(h), bh = b(h);
        const Word comm = {ah, bh, static_cast<Letter>(-ah), static_cast<Letter>(-bh)};
        relator_ = concat(relator_, comm);
    }
}

} // namespace ats::surf
