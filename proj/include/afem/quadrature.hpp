#ifndef AFEM_QUADRATURE_HPP
#define AFEM_QUADRATURE_HPP

#include <array>
#include <span>
#include <vector>

#include "afem/core.hpp"

namespace afem {

// Collection of barycentric coordinate tuples on a reference simplex.
// dim = 2: triangle, tuples (l0, l1, l2) with l0 + l1 + l2 = 1. The reference
//          map is l = (1 - x1 - x2, x1, x2).
// dim = 1: edge, tuples (l0, l1) with l0 + l1 = 1. The reference map is
//          l = (x, 1 - x), i.e. l0 is the parameter along the edge from its
//          start (l0 = 0) to its end (l0 = 1).
class Barycentric {
public:
    Barycentric(int dim, std::vector<double> data);

    int dim() const { return dim_; }
    int numPoints() const { return static_cast<int>(data_.size()) / (dim_ + 1); }
    // component i of point k
    double operator()(int i, int k) const { return data_[k * (dim_ + 1) + i]; }
    std::span<const double> point(int k) const {
        return {data_.data() + k * (dim_ + 1), static_cast<std::size_t>(dim_ + 1)};
    }

    static Barycentric triangle(const std::vector<std::array<double, 3>>& pts);
    static Barycentric edge(const std::vector<std::array<double, 2>>& pts);
    static Barycentric triangleVertices();
    static Barycentric triangleCentroid();

private:
    int dim_;
    std::vector<double> data_; // (dim+1) entries per point, point-major
};

// Nodes and normalized weights of a quadrature rule on the reference simplex;
// the weights sum to one, so integrals are measure * weighted node sum.
struct QuadratureRule {
    Barycentric nodes;
    std::vector<double> weights;
    int order; // requested exactness degree

    int dim() const { return nodes.dim(); }
    int numPoints() const { return nodes.numPoints(); }

    // Rule that integrates all polynomials of total degree <= order exactly.
    // dim 1: Gauss rule with ceil((order+1)/2) points.
    // dim 2: symmetric triangle rules up to order 5, tensorized Gauss rules
    //        through the Duffy transform (s, t) -> (s, t(1-s)) beyond.
    static QuadratureRule ofOrder(int order, int dim = 2);
};

// Gauss-Legendre nodes and weights on [0, 1], weights summing to 1.
void gaussLegendre01(int numPoints, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace afem

#endif
