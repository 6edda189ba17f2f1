#include "adsteich/surface.hpp"

namespace ats::surf {

// Keep in sync with data/curves_genus2.txt (the shipped copy); the unit
// tests diff the two. Intra-handle intersection numbers follow the torus
// slope formula |ps - qr|; handle-crossing entries were checked against
// the universal-cover enumeration at two budgets.
const std::string& genus2_library_text() {
    static const std::string text = R"(# genus-2 curve library and intersection table
# slope key, per handle h: a_h = (1,0), b_h = (0,1), ab_h = (1,1),
# aB_h = (1,-1), aab_h = (2,1); k is the separating curve [a1,b1];
# x12, y12 cross the separating curve twice.
version 1
genus 2
curve a1 simple nonseparating : a1
curve b1 simple nonseparating : b1
curve ab1 simple nonseparating : a1 b1
curve aB1 simple nonseparating : a1 B1
curve aab1 simple nonseparating : a1 a1 b1
curve a2 simple nonseparating : a2
curve b2 simple nonseparating : b2
curve ab2 simple nonseparating : a2 b2
curve aB2 simple nonseparating : a2 B2
curve aab2 simple nonseparating : a2 a2 b2
curve k simple separating : a1 b1 A1 B1
curve x12 simple nonseparating : a1 a2
curve y12 simple nonseparating : b1 b2
intersections
a1 b1 1
a1 ab1 1
a1 aB1 1
a1 aab1 1
b1 ab1 1
b1 aB1 1
b1 aab1 2
ab1 aB1 2
ab1 aab1 1
aB1 aab1 3
a2 b2 1
a2 ab2 1
a2 aB2 1
a2 aab2 1
b2 ab2 1
b2 aB2 1
b2 aab2 2
ab2 aB2 2
ab2 aab2 1
aB2 aab2 3
a1 a2 0
a1 b2 0
a1 ab2 0
a1 aB2 0
a1 aab2 0
b1 a2 0
b1 b2 0
b1 ab2 0
b1 aB2 0
b1 aab2 0
ab1 a2 0
ab1 b2 0
ab1 ab2 0
ab1 aB2 0
ab1 aab2 0
aB1 a2 0
aB1 b2 0
aB1 ab2 0
aB1 aB2 0
aB1 aab2 0
aab1 a2 0
aab1 b2 0
aab1 ab2 0
aab1 aB2 0
aab1 aab2 0
k a1 0
k b1 0
k ab1 0
k aB1 0
k aab1 0
k a2 0
k b2 0
k ab2 0
k aB2 0
k aab2 0
k x12 2
k y12 2
x12 a1 0
x12 b1 1
x12 ab1 1
x12 aB1 1
x12 aab1 1
x12 a2 0
x12 b2 1
x12 ab2 1
x12 aB2 1
x12 aab2 1
y12 a1 1
y12 b1 0
y12 ab1 1
y12 aB1 1
y12 aab1 2
y12 a2 1
y12 b2 0
y12 ab2 1
y12 aB2 1
y12 aab2 2
x12 y12 2
end
)";
    return text;
}

} // namespace ats::surf
