#ifndef AFEM_BATCHED_HPP
#define AFEM_BATCHED_HPP

#include <functional>
#include <span>
#include <vector>

#include "afem/core.hpp"

namespace afem {

// Dense 3D value batch with dimensions (component, entity, node).
// Components are fastest in memory, so the per-entity component block is
// contiguous; matrix-valued data stores its entries column-major along the
// component dimension.
class Batched {
public:
    Batched() = default;
    Batched(int components, int entities, int nodes, double fill = 0.0)
        : nc_(components), ne_(entities), nn_(nodes),
          data_(static_cast<std::size_t>(components) * entities * nodes, fill) {
        if (components < 0 || entities < 0 || nodes < 0)
            throw ShapeError("Batched: negative dimension");
    }

    int components() const { return nc_; }
    int entities() const { return ne_; }
    int nodes() const { return nn_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(int i, int j, int k) {
        return data_[static_cast<std::size_t>(i) + static_cast<std::size_t>(nc_) * (j + static_cast<std::size_t>(ne_) * k)];
    }
    double operator()(int i, int j, int k) const {
        return data_[static_cast<std::size_t>(i) + static_cast<std::size_t>(nc_) * (j + static_cast<std::size_t>(ne_) * k)];
    }

    // Read access with singleton broadcasting in all three dimensions.
    double bc(int i, int j, int k) const {
        return (*this)(nc_ == 1 ? 0 : i, ne_ == 1 ? 0 : j, nn_ == 1 ? 0 : k);
    }

    std::span<double> raw() { return data_; }
    std::span<const double> raw() const { return data_; }

    Batched map(const std::function<double(double)>& f) const;

    // Elementwise binary operation with singleton broadcasting.
    static Batched zip(const Batched& a, const Batched& b,
                       const std::function<double(double, double)>& f);

    Batched operator+(const Batched& o) const;
    Batched operator-(const Batched& o) const;
    Batched operator*(const Batched& o) const; // elementwise
    Batched operator*(double s) const;
    Batched operator+(double s) const;

private:
    int nc_ = 0, ne_ = 0, nn_ = 0;
    std::vector<double> data_;
};

// Interpretation of the component dimension as a small matrix. A transposed
// shape means the reshaped factor enters the product transposed.
struct MatShape {
    int rows = 0, cols = 0;
    bool transposed = false;
    MatShape t() const { return {rows, cols, !transposed}; }
};

// Batched matrix product: per (entity, node), reshape the component blocks of
// a and b into matrices of the given shapes (optionally transposed) and
// multiply. Entity and node dimensions broadcast where one factor is
// singleton.
Batched vectorProduct(const Batched& a, const Batched& b, MatShape sa, MatShape sb);

// Default variant: the componentwise dot product per (entity, node).
Batched vectorProduct(const Batched& a, const Batched& b);

} // namespace afem

#endif
