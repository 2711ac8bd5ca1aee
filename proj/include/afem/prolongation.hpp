#ifndef AFEM_PROLONGATION_HPP
#define AFEM_PROLONGATION_HPP

#include "afem/fe_space.hpp"
#include "afem/refinement.hpp"

namespace afem {

// Sparse embedding of a coarse finite element space into the space on the
// refined mesh, rebuilt from a RefinementRecord. For nested Lagrange spaces
// the prolongated coefficients represent the same function.
class Prolongation {
public:
    // Specialized for order 1 H1 and order 0 L2 elements: vertex values are
    // kept, midpoints average their edge endpoints, interior points average
    // the parent vertices; piecewise constants are inherited by the children.
    static Prolongation lowestOrder(const FeSpace& coarse, const FeSpace& fine,
                                    const RefinementRecord& record);

    // Elementwise Lagrange interpolation for any order.
    static Prolongation general(const FeSpace& coarse, const FeSpace& fine,
                                const RefinementRecord& record);

    std::vector<double> apply(std::span<const double> coarseCoefficients) const;

    int rows() const { return static_cast<int>(rowPtr_.size()) - 1; }
    int cols() const { return cols_; }
    // matrix entries of one row, for tests and inspection
    std::vector<std::pair<int, double>> row(int r) const;

private:
    Prolongation(int cols) : cols_(cols) {}
    void setRow(int r, std::span<const int> cols, std::span<const double> vals);
    static void validate(const FeSpace& coarse, const FeSpace& fine,
                         const RefinementRecord& record);

    int cols_;
    std::vector<int> rowPtr_{0};
    std::vector<int> colIdx_;
    std::vector<double> values_;
};

} // namespace afem

#endif
