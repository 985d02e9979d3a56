#include "signrange/point_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "signrange/error.hpp"

namespace signrange {

PointIndex::PointIndex(std::span<const Complex2> points, double min_cell) : points_(points) {
    if (points_.empty()) {
        start_.assign(2, 0);
        return;
    }
    double x1 = points_[0].re, y1 = points_[0].im;
    x0_ = x1;
    y0_ = y1;
    for (const auto& p : points_) {
        x0_ = std::min(x0_, p.re);
        x1 = std::max(x1, p.re);
        y0_ = std::min(y0_, p.im);
        y1 = std::max(y1, p.im);
    }
    const double side = std::max(1.0, std::ceil(std::sqrt(static_cast<double>(points_.size()))));
    const double extent = std::max(x1 - x0_, y1 - y0_);
    cell_ = std::max({extent / side, min_cell, 1e-300});
    nx_ = static_cast<long>(std::floor((x1 - x0_) / cell_)) + 1;
    ny_ = static_cast<long>(std::floor((y1 - y0_) / cell_)) + 1;

    std::vector<std::size_t> cell_of(points_.size());
    start_.assign(static_cast<std::size_t>(nx_ * ny_) + 1, 0);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        cell_of[i] = cell_id(cell_x(points_[i].re), cell_y(points_[i].im));
        ++start_[cell_of[i] + 1];
    }
    for (std::size_t c = 1; c < start_.size(); ++c) {
        start_[c] += start_[c - 1];
    }
    order_.resize(points_.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        order_[fill[cell_of[i]]++] = i;
    }
}

long PointIndex::cell_x(double x) const {
    return std::clamp(static_cast<long>(std::floor((x - x0_) / cell_)), 0L, nx_ - 1);
}

long PointIndex::cell_y(double y) const {
    return std::clamp(static_cast<long>(std::floor((y - y0_) / cell_)), 0L, ny_ - 1);
}

std::pair<double, std::size_t> PointIndex::nearest(Complex2 q) const {
    require(!points_.empty(), ErrorKind::InvalidArgument, "nearest query on an empty point set");
    // Unclamped query cell; rings are intersected with the grid.
    const double fx = std::floor((q.re - x0_) / cell_);
    const double fy = std::floor((q.im - y0_) / cell_);
    const double big = 1e15;
    const long qx = static_cast<long>(std::clamp(fx, -big, big));
    const long qy = static_cast<long>(std::clamp(fy, -big, big));
    const long dx0 = qx < 0 ? -qx : (qx >= nx_ ? qx - nx_ + 1 : 0);
    const long dy0 = qy < 0 ? -qy : (qy >= ny_ ? qy - ny_ + 1 : 0);
    const long r0 = std::max(dx0, dy0);
    const long rmax = r0 + std::max(nx_, ny_);

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    auto visit = [&](long cx, long cy) {
        if (cx < 0 || cy < 0 || cx >= nx_ || cy >= ny_) {
            return;
        }
        const std::size_t c = cell_id(cx, cy);
        for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) {
            const std::size_t i = order_[k];
            const double d = max_norm(points_[i] - q);
            if (d < best || (d == best && i < best_i)) {
                best = d;
                best_i = i;
            }
        }
    };
    for (long r = r0; r <= rmax; ++r) {
        if (r == 0) {
            visit(qx, qy);
        } else {
            const long xlo = std::max(qx - r, 0L), xhi = std::min(qx + r, nx_ - 1);
            const long ylo = std::max(qy - r, 0L), yhi = std::min(qy + r, ny_ - 1);
            for (long cx = xlo; cx <= xhi; ++cx) {
                visit(cx, qy - r);
                visit(cx, qy + r);
            }
            for (long cy = std::max(qy - r + 1, ylo); cy <= std::min(qy + r - 1, yhi); ++cy) {
                visit(qx - r, cy);
                visit(qx + r, cy);
            }
        }
        if (best <= static_cast<double>(r) * cell_) {
            break;
        }
    }
    return {best, best_i};
}

bool PointIndex::any_within(Complex2 q, double r) const {
    if (points_.empty()) {
        return false;
    }
    const long xlo = cell_x(q.re - r), xhi = cell_x(q.re + r);
    const long ylo = cell_y(q.im - r), yhi = cell_y(q.im + r);
    for (long cy = ylo; cy <= yhi; ++cy) {
        for (long cx = xlo; cx <= xhi; ++cx) {
            const std::size_t c = cell_id(cx, cy);
            for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) {
                if (max_norm(points_[order_[k]] - q) <= r) {
                    return true;
                }
            }
        }
    }
    return false;
}

} // namespace signrange
