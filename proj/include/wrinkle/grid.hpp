#pragma once

#include <cstdint>
#include <vector>

#include "wrinkle/geometry.hpp"
#include "wrinkle/parallel.hpp"

namespace wrinkle {

struct GridSpec {
    int nx = 256;
    int ny = 256;
};

// Cell-centred grid over the bounding box of a domain. Cells cut by the
// boundary are integrated with sub x sub inside sub-samples.
class MaskedGrid {
public:
    static constexpr int sub = 4;
    enum CellKind : std::uint8_t { outside = 0, cut = 1, interior = 2 };

    MaskedGrid(const Domain& domain, GridSpec spec);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double h() const { return std::min(dx_, dy_); }
    const Box& box() const { return box_; }
    Point2 center(int i, int j) const { return {box_.lo.x + (i + 0.5) * dx_, box_.lo.y + (j + 0.5) * dy_}; }
    Point2 subpoint(int i, int j, int a, int b) const {
        return {box_.lo.x + (i + (a + 0.5) / sub) * dx_, box_.lo.y + (j + (b + 0.5) / sub) * dy_};
    }
    CellKind cell(int i, int j) const { return static_cast<CellKind>(kind_[index(i, j)]); }
    // whether the cell centre lies in the closed domain
    bool center_inside(int i, int j) const { return center_in_[index(i, j)] != 0; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
    bool subpoint_inside(int i, int j, int a, int b) const;
    double measure() const;

    // masked midpoint rule for f(Point2) -> double
    template <class F>
    double integrate(F&& f) const {
        std::vector<double> rows(ny_, 0.0);
        parallel_for(ny_, [&](std::size_t jj) {
            const int j = static_cast<int>(jj);
            double s = 0.0;
            for (int i = 0; i < nx_; ++i) {
                const auto k = cell(i, j);
                if (k == interior) {
                    s += f(center(i, j));
                } else if (k == cut) {
                    double c = 0.0;
                    for (int b = 0; b < sub; ++b)
                        for (int a = 0; a < sub; ++a)
                            if (subpoint_inside(i, j, a, b)) c += f(subpoint(i, j, a, b));
                    s += c / (sub * sub);
                }
            }
            rows[jj] = s;
        });
        double total = 0.0;
        for (double r : rows) total += r;
        return total * dx_ * dy_;
    }

private:
    int nx_, ny_;
    double dx_, dy_;
    Box box_;
    std::vector<std::uint8_t> kind_;
    std::vector<std::uint8_t> center_in_;
    std::vector<std::uint16_t> submask_;
};

}  // namespace wrinkle
