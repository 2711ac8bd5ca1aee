#ifndef AFEM_SPARSE_HPP
#define AFEM_SPARSE_HPP

#include <Eigen/SparseCore>
#include <span>
#include <vector>

#include "afem/core.hpp"

namespace afem {

// Square sparse matrix accumulated from triplets; duplicate (row, col)
// entries sum up on compression. The symmetry flag is a structural hint set
// by the assembly (no convection term) and steers the default solver choice.
class SparseSystem {
public:
    explicit SparseSystem(int dim, bool symmetricHint = false)
        : dim_(dim), symmetric_(symmetricHint) {}

    int dim() const { return dim_; }
    bool symmetricHint() const { return symmetric_; }
    std::size_t tripletCount() const { return triplets_.size(); }

    void accumulate(int row, int col, double value) {
        if (row < 0 || row >= dim_ || col < 0 || col >= dim_)
            throw Error("SparseSystem: index out of range");
        triplets_.emplace_back(row, col, value);
    }

    Eigen::SparseMatrix<double> compressed() const;

    // Restriction to the given dofs (ascending), dropping all other rows and
    // columns and renumbering.
    SparseSystem restricted(std::span<const int> keep) const;

    std::vector<double> multiply(std::span<const double> x) const;
    // x^T A y without compression
    double bilinear(std::span<const double> x, std::span<const double> y) const;

private:
    int dim_;
    bool symmetric_;
    std::vector<Eigen::Triplet<double>> triplets_;
};

enum class SolverKind {
    Auto,     // Cholesky-type for symmetric systems, LU otherwise
    Cholesky, // sparse direct LDLT
    Lu,       // sparse direct LU
    Cg,       // diagonally preconditioned conjugate gradients, tol 1e-10
};

SolverKind solverFromName(const std::string& name);

// Solves A x = rhs and verifies ||A x - rhs|| <= 1e-10 ||rhs||; a violated
// residual bound raises an error reporting the achieved residual.
std::vector<double> solve(const SparseSystem& system, std::span<const double> rhs,
                          SolverKind kind = SolverKind::Auto);
// Multiple right-hand sides sharing one factorization.
std::vector<std::vector<double>> solve(const SparseSystem& system,
                                       const std::vector<std::vector<double>>& rhs,
                                       SolverKind kind = SolverKind::Auto);

} // namespace afem

#endif
