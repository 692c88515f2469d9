#include "samweb/rational.hpp"

namespace samweb {

bool exact_root(const Integer& value, unsigned q, Integer& root) {
    if (value < 0) return false;
    if (q == 0) return false;
    if (q == 1 || value == 0 || value == 1) {
        root = value;
        return true;
    }
    // Binary search for the integer q-th root, then verify exactness.
    Integer lo = 1, hi = value;
    while (lo < hi) {
        Integer mid = (lo + hi + 1) / 2;
        Integer p = 1;
        bool over = false;
        for (unsigned i = 0; i < q; ++i) {
            p *= mid;
            if (p > value) {
                over = true;
                break;
            }
        }
        if (over)
            hi = mid - 1;
        else
            lo = mid;
    }
    Integer p = 1;
    for (unsigned i = 0; i < q; ++i) p *= lo;
    if (p == value) {
        root = lo;
        return true;
    }
    return false;
}

} // namespace samweb
