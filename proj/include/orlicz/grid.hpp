#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "orlicz/point.hpp"

namespace orlicz {

// Uniform rectangular lattice on an axis-aligned box in R^N, N in [2, kMaxDim].
// Nodes are indexed row-major with the last axis varying fastest.
class Grid {
public:
    Grid(int dim, std::array<double, kMaxDim> lo, std::array<double, kMaxDim> hi,
         std::array<int, kMaxDim> res);

    static Grid unit_square(int n1, int n2);
    static Grid unit_cube(int n1, int n2, int n3);

    int dim() const { return dim_; }
    double lo(int axis) const { return lo_[static_cast<std::size_t>(axis)]; }
    double hi(int axis) const { return hi_[static_cast<std::size_t>(axis)]; }
    int res(int axis) const { return res_[static_cast<std::size_t>(axis)]; }
    double spacing(int axis) const { return h_[static_cast<std::size_t>(axis)]; }
    std::size_t size() const { return size_; }

    Point node(std::size_t flat) const { return nodes_[flat]; }
    std::size_t flatten(const std::array<int, kMaxDim>& multi) const;
    std::array<int, kMaxDim> unflatten(std::size_t flat) const;

    // Tensor-trapezoid quadrature weight of a node (volume measure).
    const std::vector<double>& volume_weights() const { return vol_w_; }
    const std::vector<Point>& nodes() const { return nodes_; }

    struct BoundarySample {
        std::size_t node;  // flat node index
        double weight;     // (N-1)-dimensional trapezoid weight of this face's quadrature
        int face;          // 2*axis + (0: lower, 1: upper)
    };
    // One entry per (face, node-on-face) pair; corner nodes appear once per
    // incident face.
    const std::vector<BoundarySample>& boundary_samples() const { return bnd_; }

    bool same_layout(const Grid& o) const;

    // Multi-indices of all 1-D lines along `axis` (the axis coordinate is 0).
    std::vector<std::array<int, kMaxDim>> lines(int axis) const;

private:
    int dim_;
    std::array<double, kMaxDim> lo_{}, hi_{};
    std::array<int, kMaxDim> res_{};
    std::array<double, kMaxDim> h_{};
    std::array<std::size_t, kMaxDim> stride_{};
    std::size_t size_ = 0;
    std::vector<double> vol_w_;
    std::vector<Point> nodes_;
    std::vector<BoundarySample> bnd_;
};

// Nodal scalar field on a Grid.
class DiscreteField {
public:
    explicit DiscreteField(Grid grid, double fill = 0.0);
    DiscreteField(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    // Restriction to the boundary, ordered like Grid::boundary_samples().
    std::vector<double> boundary_view() const;

    double max_abs() const;
    bool all_zero() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

// Discrete partial along `axis`: central differences in the interior,
// one-sided second-order stencils on the two boundary layers.
DiscreteField axis_derivative(const DiscreteField& u, int axis);

// Exact algebraic transpose of axis_derivative applied to a weighted nodal
// vector: out_k = sum_j D_{j,k} y_j. Pairing <adjoint(y), v> equals
// sum_j y_j (Dv)_j to machine precision.
std::vector<double> axis_derivative_adjoint(const Grid& grid, const std::vector<double>& y,
                                            int axis);

// CSV exchange format: header line with per-axis node counts, then row-major
// nodal values (one grid row per line, shortest round-trip decimals).
void write_field_csv(std::ostream& os, const DiscreteField& u);
void write_field_csv(const std::string& path, const DiscreteField& u);
DiscreteField read_field_csv(std::istream& is, const std::array<double, kMaxDim>& lo,
                             const std::array<double, kMaxDim>& hi);
DiscreteField read_field_csv(const std::string& path, const std::array<double, kMaxDim>& lo,
                             const std::array<double, kMaxDim>& hi);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace orlicz
