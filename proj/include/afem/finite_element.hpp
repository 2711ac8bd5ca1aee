#ifndef AFEM_FINITE_ELEMENT_HPP
#define AFEM_FINITE_ELEMENT_HPP

#include <vector>

#include "afem/batched.hpp"
#include "afem/quadrature.hpp"

namespace afem {

enum class Conformity {
    H1, // globally continuous Lagrange elements, order >= 1
    L2, // discontinuous elementwise Lagrange, order >= 0
};

// Lagrange element on the reference triangle. The local node order is
//   vertices 0, 1, 2;
//   nodes on edge (0,1), then (1,2), then (2,0), each walked from the lower
//   local vertex of the pair toward the higher at fractions 1/p .. (p-1)/p;
//   interior nodes.
// The nodal basis is realized through Bernstein polynomials evaluated with
// the triangular degree recurrence and converted to Lagrange form once per
// element; evaluation batches are laid out (component, basis function, node).
class FiniteElement {
public:
    FiniteElement(Conformity conformity, int order);

    Conformity conformity() const { return conformity_; }
    int order() const { return order_; }
    int localDofCount() const { return static_cast<int>(nodes_.size()) / 3; }
    int vertexDofCount() const { return conformity_ == Conformity::H1 ? 1 : 0; }
    int edgeInteriorDofCount() const { return conformity_ == Conformity::H1 ? order_ - 1 : 0; }
    int interiorDofCount() const;

    // barycentric coordinates of the local Lagrange nodes
    Barycentric nodes() const { return Barycentric(2, nodes_); }

    Batched evalValues(const Barycentric& bary) const;    // 1 component
    Batched evalGradients(const Barycentric& bary) const; // (d/dx, d/dy) on Tref
    Batched evalHessians(const Barycentric& bary) const;  // column-major 2x2

    // Trace basis on an edge (H1 only): values of the p+1 one-dimensional
    // Lagrange functions with node order [start, end, interior ascending],
    // evaluated at the edge parameter of each barycentric tuple.
    Batched evalEdgeValues(const Barycentric& bary) const;

private:
    Conformity conformity_;
    int order_;
    std::vector<double> nodes_;          // 3 entries per local node
    std::vector<double> bernsteinToNodal_; // row-major (localDof x numBernstein)
};

} // namespace afem

#endif
