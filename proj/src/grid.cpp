#include "orlicz/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace orlicz {

Grid::Grid(int dim, std::array<double, kMaxDim> lo, std::array<double, kMaxDim> hi,
           std::array<int, kMaxDim> res)
    : dim_(dim), lo_(lo), hi_(hi), res_(res) {
    if (dim < 2 || dim > kMaxDim) throw std::invalid_argument("grid: dimension out of range");
    size_ = 1;
    for (int a = 0; a < dim_; ++a) {
        const auto ai = static_cast<std::size_t>(a);
        if (res_[ai] < 3) throw std::invalid_argument("grid: need at least 3 nodes per axis");
        if (!(hi_[ai] > lo_[ai])) throw std::invalid_argument("grid: empty axis interval");
        h_[ai] = (hi_[ai] - lo_[ai]) / (res_[ai] - 1);
        size_ *= static_cast<std::size_t>(res_[ai]);
    }
    // row-major, last axis fastest
    std::size_t s = 1;
    for (int a = dim_ - 1; a >= 0; --a) {
        stride_[static_cast<std::size_t>(a)] = s;
        s *= static_cast<std::size_t>(res_[static_cast<std::size_t>(a)]);
    }

    vol_w_.resize(size_);
    nodes_.resize(size_);
    for (std::size_t k = 0; k < size_; ++k) {
        const auto mi = unflatten(k);
        double w = 1.0;
        Point p;
        p.dim = dim_;
        for (int a = 0; a < dim_; ++a) {
            const auto ai = static_cast<std::size_t>(a);
            const bool edge = mi[ai] == 0 || mi[ai] == res_[ai] - 1;
            w *= h_[ai] * (edge ? 0.5 : 1.0);
            p[a] = lo_[ai] + h_[ai] * mi[ai];
        }
        vol_w_[k] = w;
        nodes_[k] = p;
    }

    // Boundary faces: per face an (N-1)-dimensional trapezoid rule.
    for (int a = 0; a < dim_; ++a) {
        for (int side = 0; side < 2; ++side) {
            const int face = 2 * a + side;
            std::array<int, kMaxDim> mi{};
            // iterate nodes of the face (axis a fixed)
            std::size_t face_nodes = 1;
            for (int b = 0; b < dim_; ++b)
                if (b != a) face_nodes *= static_cast<std::size_t>(res_[static_cast<std::size_t>(b)]);
            for (std::size_t f = 0; f < face_nodes; ++f) {
                std::size_t rem = f;
                for (int b = dim_ - 1; b >= 0; --b) {
                    if (b == a) continue;
                    const auto bi = static_cast<std::size_t>(b);
                    mi[bi] = static_cast<int>(rem % static_cast<std::size_t>(res_[bi]));
                    rem /= static_cast<std::size_t>(res_[bi]);
                }
                mi[static_cast<std::size_t>(a)] = side == 0 ? 0 : res_[static_cast<std::size_t>(a)] - 1;
                double w = 1.0;
                for (int b = 0; b < dim_; ++b) {
                    if (b == a) continue;
                    const auto bi = static_cast<std::size_t>(b);
                    const bool edge = mi[bi] == 0 || mi[bi] == res_[bi] - 1;
                    w *= h_[bi] * (edge ? 0.5 : 1.0);
                }
                bnd_.push_back({flatten(mi), w, face});
            }
        }
    }
}

Grid Grid::unit_square(int n1, int n2) {
    return Grid(2, {0.0, 0.0}, {1.0, 1.0}, {n1, n2});
}

Grid Grid::unit_cube(int n1, int n2, int n3) {
    return Grid(3, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {n1, n2, n3});
}

std::size_t Grid::flatten(const std::array<int, kMaxDim>& multi) const {
    std::size_t k = 0;
    for (int a = 0; a < dim_; ++a)
        k += stride_[static_cast<std::size_t>(a)] *
             static_cast<std::size_t>(multi[static_cast<std::size_t>(a)]);
    return k;
}

std::array<int, kMaxDim> Grid::unflatten(std::size_t flat) const {
    std::array<int, kMaxDim> mi{};
    for (int a = 0; a < dim_; ++a) {
        const auto ai = static_cast<std::size_t>(a);
        mi[ai] = static_cast<int>(flat / stride_[ai]);
        flat %= stride_[ai];
    }
    return mi;
}

bool Grid::same_layout(const Grid& o) const {
    if (dim_ != o.dim_) return false;
    for (int a = 0; a < dim_; ++a) {
        const auto ai = static_cast<std::size_t>(a);
        if (res_[ai] != o.res_[ai] || lo_[ai] != o.lo_[ai] || hi_[ai] != o.hi_[ai]) return false;
    }
    return true;
}

std::vector<std::array<int, kMaxDim>> Grid::lines(int axis) const {
    std::vector<std::array<int, kMaxDim>> out;
    std::size_t count = 1;
    for (int b = 0; b < dim_; ++b)
        if (b != axis) count *= static_cast<std::size_t>(res_[static_cast<std::size_t>(b)]);
    out.reserve(count);
    for (std::size_t f = 0; f < count; ++f) {
        std::array<int, kMaxDim> mi{};
        std::size_t rem = f;
        for (int b = dim_ - 1; b >= 0; --b) {
            if (b == axis) continue;
            const auto bi = static_cast<std::size_t>(b);
            mi[bi] = static_cast<int>(rem % static_cast<std::size_t>(res_[bi]));
            rem /= static_cast<std::size_t>(res_[bi]);
        }
        mi[static_cast<std::size_t>(axis)] = 0;
        out.push_back(mi);
    }
    return out;
}

DiscreteField::DiscreteField(Grid grid, double fill)
    : grid_(std::move(grid)), values_(grid_.size(), fill) {}

DiscreteField::DiscreteField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("field: value count does not match grid");
}

std::vector<double> DiscreteField::boundary_view() const {
    const auto& bs = grid_.boundary_samples();
    std::vector<double> out(bs.size());
    for (std::size_t i = 0; i < bs.size(); ++i) out[i] = values_[bs[i].node];
    return out;
}

double DiscreteField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool DiscreteField::all_zero() const {
    for (double v : values_)
        if (v != 0.0) return false;
    return true;
}

DiscreteField axis_derivative(const DiscreteField& u, int axis) {
    const Grid& g = u.grid();
    DiscreteField out(g);
    const double h = g.spacing(axis);
    const int n = g.res(axis);
    const std::size_t stride = [&] {
        std::array<int, kMaxDim> a{}, b{};
        b[static_cast<std::size_t>(axis)] = 1;
        return g.flatten(b) - g.flatten(a);
    }();
    const auto lines = g.lines(axis);
    for (const auto& line : lines) {
        const std::size_t base = g.flatten(line);
        auto at = [&](int j) { return u[base + stride * static_cast<std::size_t>(j)]; };
        auto& vals = out.values();
        vals[base] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
        for (int j = 1; j < n - 1; ++j)
            vals[base + stride * static_cast<std::size_t>(j)] = (at(j + 1) - at(j - 1)) / (2.0 * h);
        vals[base + stride * static_cast<std::size_t>(n - 1)] =
            (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
    }
    return out;
}

std::vector<double> axis_derivative_adjoint(const Grid& g, const std::vector<double>& y,
                                            int axis) {
    std::vector<double> out(g.size(), 0.0);
    const double h = g.spacing(axis);
    const int n = g.res(axis);
    const std::size_t stride = [&] {
        std::array<int, kMaxDim> a{}, b{};
        b[static_cast<std::size_t>(axis)] = 1;
        return g.flatten(b) - g.flatten(a);
    }();
    for (const auto& line : g.lines(axis)) {
        const std::size_t base = g.flatten(line);
        auto idx = [&](int j) { return base + stride * static_cast<std::size_t>(j); };
        // first row: (-3 u0 + 4 u1 - u2)/(2h)
        out[idx(0)] += -3.0 * y[idx(0)] / (2.0 * h);
        out[idx(1)] += 4.0 * y[idx(0)] / (2.0 * h);
        out[idx(2)] += -1.0 * y[idx(0)] / (2.0 * h);
        for (int j = 1; j < n - 1; ++j) {
            out[idx(j + 1)] += y[idx(j)] / (2.0 * h);
            out[idx(j - 1)] -= y[idx(j)] / (2.0 * h);
        }
        // last row: (3 u_{n-1} - 4 u_{n-2} + u_{n-3})/(2h)
        out[idx(n - 1)] += 3.0 * y[idx(n - 1)] / (2.0 * h);
        out[idx(n - 2)] += -4.0 * y[idx(n - 1)] / (2.0 * h);
        out[idx(n - 3)] += 1.0 * y[idx(n - 1)] / (2.0 * h);
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_field_csv(std::ostream& os, const DiscreteField& u) {
    const Grid& g = u.grid();
    for (int a = 0; a < g.dim(); ++a) os << (a ? "," : "") << g.res(a);
    os << "\n";
    const int row_len = g.res(g.dim() - 1);
    for (std::size_t k = 0; k < u.size(); ++k) {
        os << format_double(u[k]);
        os << ((static_cast<int>(k % static_cast<std::size_t>(row_len)) == row_len - 1) ? "\n"
                                                                                        : ",");
    }
}

void write_field_csv(const std::string& path, const DiscreteField& u) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_field_csv(os, u);
}

DiscreteField read_field_csv(std::istream& is, const std::array<double, kMaxDim>& lo,
                             const std::array<double, kMaxDim>& hi) {
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("field csv: empty input");
    std::array<int, kMaxDim> res{};
    int dim = 0;
    {
        std::stringstream ss(header);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (dim >= kMaxDim) throw std::runtime_error("field csv: too many axes");
            res[static_cast<std::size_t>(dim++)] = std::stoi(tok);
        }
    }
    Grid g(dim, lo, hi, res);
    std::vector<double> values;
    values.reserve(g.size());
    std::string line;
    while (std::getline(is, line)) {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            values.push_back(std::stod(tok));
        }
    }
    if (values.size() != g.size()) throw std::runtime_error("field csv: value count mismatch");
    return DiscreteField(std::move(g), std::move(values));
}

DiscreteField read_field_csv(const std::string& path, const std::array<double, kMaxDim>& lo,
                             const std::array<double, kMaxDim>& hi) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_field_csv(is, lo, hi);
}

}  // namespace orlicz
