#include "wrinkle/grid.hpp"

#include "wrinkle/error.hpp"

namespace wrinkle {

MaskedGrid::MaskedGrid(const Domain& domain, GridSpec spec)
    : nx_(spec.nx), ny_(spec.ny), box_(domain.bounding_box()) {
    if (nx_ < 32 || ny_ < 32) fail(ErrorKind::resolution, "grid resolution below 32 cells per axis");
    dx_ = box_.width() / nx_;
    dy_ = box_.height() / ny_;
    kind_.assign(static_cast<std::size_t>(nx_) * ny_, outside);
    center_in_.assign(kind_.size(), 0);
    submask_.assign(kind_.size(), 0);
    parallel_for(ny_, [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        for (int i = 0; i < nx_; ++i) {
            const std::size_t k = index(i, j);
            center_in_[k] = domain.contains(center(i, j)) ? 1 : 0;
            const Point2 lo{box_.lo.x + i * dx_, box_.lo.y + j * dy_};
            const bool all = domain.contains(lo) && domain.contains(lo + Vec2{dx_, 0.0}) &&
                             domain.contains(lo + Vec2{0.0, dy_}) && domain.contains(lo + Vec2{dx_, dy_});
            if (all) {
                kind_[k] = interior;
                submask_[k] = 0xFFFF;
                continue;
            }
            std::uint16_t m = 0;
            for (int b = 0; b < sub; ++b)
                for (int a = 0; a < sub; ++a)
                    if (domain.contains(subpoint(i, j, a, b))) m |= static_cast<std::uint16_t>(1u << (b * sub + a));
            submask_[k] = m;
            kind_[k] = m ? cut : outside;
        }
    });
}

bool MaskedGrid::subpoint_inside(int i, int j, int a, int b) const {
    return (submask_[index(i, j)] >> (b * sub + a)) & 1u;
}

double MaskedGrid::measure() const {
    return integrate([](Point2) { return 1.0; });
}

}  // namespace wrinkle
