#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "signrange/complex2.hpp"

namespace signrange {

/// Uniform-grid bucket index over a fixed point cloud for max-norm proximity queries.
class PointIndex {
public:
    /// `min_cell` bounds the bucket side from below; the grid has at most ~sqrt(n) buckets per side.
    explicit PointIndex(std::span<const Complex2> points, double min_cell = 0.0);

    std::size_t size() const { return points_.size(); }

    /// (distance, position) of the nearest point in max-norm. Requires a nonempty cloud.
    std::pair<double, std::size_t> nearest(Complex2 q) const;

    /// True iff some point lies within max-norm distance r of q.
    bool any_within(Complex2 q, double r) const;

private:
    long cell_x(double x) const;
    long cell_y(double y) const;
    std::size_t cell_id(long cx, long cy) const { return static_cast<std::size_t>(cy) * nx_ + static_cast<std::size_t>(cx); }

    std::span<const Complex2> points_;
    double x0_ = 0.0, y0_ = 0.0, cell_ = 1.0;
    long nx_ = 1, ny_ = 1;
    std::vector<std::size_t> start_;
    std::vector<std::size_t> order_;
};

} // namespace signrange
