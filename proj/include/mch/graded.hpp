// Koszul sign bookkeeping.
//
// Every module routes its signs through the routines below; there is
// deliberately a single implementation of "sign of a permutation acting on
// graded symbols" in the whole library.

#pragma once

#include <algorithm>
#include <utility>
#include <vector>

namespace mch {

// Sign picked up when sorting `items` by `key`, where transposing two
// adjacent entries of odd degree contributes -1. Sorts in place (stable).
template <class T, class DegFn, class KeyFn>
int koszul_sort(std::vector<T>& items, DegFn degree, KeyFn key) {
    int sign = 1;
    const int m = static_cast<int>(items.size());
    for (int i = 1; i < m; ++i) {
        for (int j = i; j > 0 && key(items[j]) < key(items[j - 1]); --j) {
            if ((degree(items[j]) & 1) && (degree(items[j - 1]) & 1)) sign = -sign;
            std::swap(items[j], items[j - 1]);
        }
    }
    return sign;
}

// Sign of the unshuffle moving the positions `front` (strictly increasing)
// of a list with the given degrees to the front, orders preserved on both
// sides. Each selected odd element jumps over every unselected odd element
// sitting before it.
inline int koszul_unshuffle_sign(const std::vector<int>& degrees, const std::vector<int>& front) {
    int sign = 1;
    for (int i : front) {
        if (!(degrees[i] & 1)) continue;
        for (int j = 0; j < i; ++j) {
            if (!(degrees[j] & 1)) continue;
            if (std::find(front.begin(), front.end(), j) == front.end()) sign = -sign;
        }
    }
    return sign;
}

// Sign of rearranging graded symbols into the order given by `perm`
// (perm[k] = original position of the symbol now in slot k).
inline int koszul_perm_sign(const std::vector<int>& degrees, const std::vector<int>& perm) {
    int sign = 1;
    const int m = static_cast<int>(perm.size());
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            if (perm[a] > perm[b] && (degrees[perm[a]] & 1) && (degrees[perm[b]] & 1)) sign = -sign;
    return sign;
}

}  // namespace mch
