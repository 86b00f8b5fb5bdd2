#include "microcell/render.hpp"

#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

namespace microcell {

RGBImage render_labels(const ComponentSet& components, uint32_t seed) {
    RGBImage out(components.width, components.height);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> channel(0, 255);
    std::set<std::tuple<int, int, int>> used;

    for (const auto& comp : components.components) {
        int r, g, b;
        do {
            r = channel(rng);
            g = channel(rng);
            b = channel(rng);
        } while ((r + g + b < 96) || used.count({r, g, b}));  // not near-black, not reused
        used.insert({r, g, b});
        for (const auto& p : comp.pixels) {
            if (p.row < 0 || p.row >= components.height || p.col < 0 || p.col >= components.width)
                throw std::invalid_argument("component pixel out of bounds");
            const size_t i = size_t(p.row) * components.width + p.col;
            out.r[i] = uint8_t(r);
            out.g[i] = uint8_t(g);
            out.b[i] = uint8_t(b);
        }
    }
    return out;
}

RGBImage render_diff(const BinaryMask& a, const BinaryMask& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("mask dimensions differ");
    RGBImage out(a.width, a.height);
    for (size_t i = 0; i < a.bits.size(); ++i) {
        const bool in_a = a.bits[i] != 0, in_b = b.bits[i] != 0;
        if (in_a && in_b) {
            out.r[i] = out.g[i] = out.b[i] = 255;
        } else if (in_a) {
            out.r[i] = 255;
        } else if (in_b) {
            out.b[i] = 255;
        }
    }
    return out;
}

}  // namespace microcell
