#pragma once

#include <cstddef>
#include <string>

namespace shifteq {

// Named finite index set; elements are 0..size-1. Two index sets compose
// only when both name and size agree, so chain endpoints V, W, U_i are
// checked by identity rather than by accidental size coincidence.
struct IndexSet {
    std::string name;
    std::size_t size = 0;

    friend bool operator==(const IndexSet& a, const IndexSet& b) {
        return a.name == b.name && a.size == b.size;
    }
    friend bool operator!=(const IndexSet& a, const IndexSet& b) { return !(a == b); }

    std::string describe() const { return name + "(" + std::to_string(size) + ")"; }
};

}  // namespace shifteq
