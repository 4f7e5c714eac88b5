#pragma once

#include <array>
#include <cstdint>
#include <cstring>

#include "orlicz/point.hpp"

namespace orlicz::detail {

// Exact-coordinate key for per-x-slice caches (grid nodes repeat bit-exactly).
struct SliceKey {
    std::array<double, kMaxDim> c{};
    int dim = 0;
    bool operator==(const SliceKey& o) const { return dim == o.dim && c == o.c; }
};

struct SliceKeyHash {
    std::size_t operator()(const SliceKey& k) const {
        std::size_t h = static_cast<std::size_t>(k.dim) * 0x9e3779b97f4a7c15ULL;
        for (int i = 0; i < k.dim; ++i) {
            std::uint64_t bits;
            std::memcpy(&bits, &k.c[static_cast<std::size_t>(i)], sizeof bits);
            h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

inline SliceKey key_of(const Point& x) {
    SliceKey k;
    k.dim = x.dim;
    for (int i = 0; i < x.dim; ++i) k.c[static_cast<std::size_t>(i)] = x[i];
    return k;
}

}  // namespace orlicz::detail
