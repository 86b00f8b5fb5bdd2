#include "microcell/components.hpp"

#include <algorithm>
#include <stdexcept>

namespace microcell {

ComponentSet label_components(const BinaryMask& mask) {
    ComponentSet set;
    set.width = mask.width;
    set.height = mask.height;

    std::vector<int> label(mask.bits.size(), 0);
    std::vector<PixelCoord> stack;
    int next_id = 0;

    for (int row = 0; row < mask.height; ++row) {
        for (int col = 0; col < mask.width; ++col) {
            const size_t idx = size_t(row) * mask.width + col;
            if (!mask.bits[idx] || label[idx]) continue;

            Component comp;
            comp.id = ++next_id;
            label[idx] = comp.id;
            stack.clear();
            stack.push_back({row, col});
            while (!stack.empty()) {
                const PixelCoord p = stack.back();
                stack.pop_back();
                comp.pixels.push_back(p);
                static constexpr int dr[4] = {-1, 1, 0, 0};
                static constexpr int dc[4] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    const int nr = p.row + dr[k], nc = p.col + dc[k];
                    if (nr < 0 || nr >= mask.height || nc < 0 || nc >= mask.width) continue;
                    const size_t nidx = size_t(nr) * mask.width + nc;
                    if (mask.bits[nidx] && !label[nidx]) {
                        label[nidx] = comp.id;
                        stack.push_back({nr, nc});
                    }
                }
            }
            std::sort(comp.pixels.begin(), comp.pixels.end(), [](const PixelCoord& a, const PixelCoord& b) {
                return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
            comp.min_row = comp.max_row = comp.pixels.front().row;
            comp.min_col = comp.max_col = comp.pixels.front().col;
            double sum_r = 0.0, sum_c = 0.0;
            for (const auto& p : comp.pixels) {
                comp.min_row = std::min(comp.min_row, p.row);
                comp.max_row = std::max(comp.max_row, p.row);
                comp.min_col = std::min(comp.min_col, p.col);
                comp.max_col = std::max(comp.max_col, p.col);
                sum_r += p.row;
                sum_c += p.col;
            }
            comp.centroid_row = sum_r / double(comp.pixels.size());
            comp.centroid_col = sum_c / double(comp.pixels.size());
            set.components.push_back(std::move(comp));
        }
    }
    return set;
}

BinaryMask mask_from_components(const ComponentSet& set) {
    BinaryMask mask(set.width, set.height);
    for (const auto& comp : set.components)
        for (const auto& p : comp.pixels) {
            if (p.row < 0 || p.row >= set.height || p.col < 0 || p.col >= set.width)
                throw std::invalid_argument("component pixel out of bounds");
            mask.set(p.row, p.col, true);
        }
    return mask;
}

}  // namespace microcell
