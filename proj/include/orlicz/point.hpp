#pragma once

#include <array>
#include <initializer_list>

namespace orlicz {

inline constexpr int kMaxDim = 4;

// Spatial point in the closed domain. Fixed capacity keeps hot loops
// allocation-free; dim is the active dimension (2 or 3 in practice).
struct Point {
    std::array<double, kMaxDim> c{};
    int dim = 0;

    Point() = default;
    Point(std::initializer_list<double> cs) {
        for (double v : cs) c[static_cast<std::size_t>(dim++)] = v;
    }

    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    bool operator==(const Point& o) const {
        if (dim != o.dim) return false;
        for (int i = 0; i < dim; ++i)
            if (c[static_cast<std::size_t>(i)] != o.c[static_cast<std::size_t>(i)]) return false;
        return true;
    }
};

}  // namespace orlicz
