#include "afem/sparse.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>

namespace afem {

Eigen::SparseMatrix<double> SparseSystem::compressed() const {
    Eigen::SparseMatrix<double> m(dim_, dim_);
    m.setFromTriplets(triplets_.begin(), triplets_.end());
    return m;
}

SparseSystem SparseSystem::restricted(std::span<const int> keep) const {
    std::vector<int> map(dim_, -1);
    for (std::size_t i = 0; i < keep.size(); ++i) map[keep[i]] = static_cast<int>(i);
    SparseSystem out(static_cast<int>(keep.size()), symmetric_);
    out.triplets_.reserve(triplets_.size());
    for (const auto& t : triplets_) {
        const int r = map[t.row()], c = map[t.col()];
        if (r >= 0 && c >= 0) out.triplets_.emplace_back(r, c, t.value());
    }
    return out;
}

std::vector<double> SparseSystem::multiply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) throw ShapeError("SparseSystem::multiply: size mismatch");
    std::vector<double> y(dim_, 0.0);
    for (const auto& t : triplets_) y[t.row()] += t.value() * x[t.col()];
    return y;
}

double SparseSystem::bilinear(std::span<const double> x, std::span<const double> y) const {
    if (static_cast<int>(x.size()) != dim_ || static_cast<int>(y.size()) != dim_)
        throw ShapeError("SparseSystem::bilinear: size mismatch");
    double s = 0.0;
    for (const auto& t : triplets_) s += x[t.row()] * t.value() * y[t.col()];
    return s;
}

SolverKind solverFromName(const std::string& name) {
    if (name == "auto") return SolverKind::Auto;
    if (name == "cholesky") return SolverKind::Cholesky;
    if (name == "lu") return SolverKind::Lu;
    if (name == "cg") return SolverKind::Cg;
    throw Error("unknown solver: " + name);
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

double relativeResidual(const SpMat& a, const Eigen::MatrixXd& x, const Eigen::MatrixXd& rhs) {
    const double rhsNorm = rhs.norm();
    const double res = (a * x - rhs).norm();
    return rhsNorm > 0.0 ? res / rhsNorm : res;
}

Eigen::MatrixXd solveDense(const SparseSystem& system, const Eigen::MatrixXd& rhs,
                           SolverKind kind) {
    const SpMat a = system.compressed();
    if (kind == SolverKind::Auto)
        kind = system.symmetricHint() ? SolverKind::Cholesky : SolverKind::Lu;

    constexpr double tol = 1e-10;
    Eigen::MatrixXd x;
    double res = 0.0;

    if (kind == SolverKind::Cg) {
        Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(tol);
        cg.setMaxIterations(20 * system.dim() + 100);
        cg.compute(a);
        x = cg.solve(rhs);
        res = relativeResidual(a, x, rhs);
        if (res <= tol) return x;
        throw Error("solve: cg did not converge, residual " + std::to_string(res));
    }

    if (kind == SolverKind::Cholesky) {
        Eigen::SimplicialLDLT<SpMat> solver(a);
        if (solver.info() == Eigen::Success) {
            x = solver.solve(rhs);
            res = relativeResidual(a, x, rhs);
            if (res <= tol) return x;
        }
        // fall through to LU; the residual check also guards against a
        // symmetric hint on an unsymmetric matrix
    }

    Eigen::SparseLU<SpMat> solver;
    solver.compute(a);
    if (solver.info() != Eigen::Success) throw Error("solve: factorization failed");
    x = solver.solve(rhs);
    res = relativeResidual(a, x, rhs);
    if (res > tol) throw Error("solve: residual bound violated, achieved " + std::to_string(res));
    return x;
}

} // namespace

std::vector<double> solve(const SparseSystem& system, std::span<const double> rhs,
                          SolverKind kind) {
    if (static_cast<int>(rhs.size()) != system.dim())
        throw ShapeError("solve: right-hand side does not match the system dimension");
    if (system.dim() == 0) return {};
    Eigen::MatrixXd b(system.dim(), 1);
    for (int i = 0; i < system.dim(); ++i) b(i, 0) = rhs[i];
    const Eigen::MatrixXd x = solveDense(system, b, kind);
    return std::vector<double>(x.data(), x.data() + system.dim());
}

std::vector<std::vector<double>> solve(const SparseSystem& system,
                                       const std::vector<std::vector<double>>& rhs,
                                       SolverKind kind) {
    std::vector<std::vector<double>> result(rhs.size());
    if (system.dim() == 0) return result;
    Eigen::MatrixXd b(system.dim(), static_cast<int>(rhs.size()));
    for (std::size_t j = 0; j < rhs.size(); ++j) {
        if (static_cast<int>(rhs[j].size()) != system.dim())
            throw ShapeError("solve: right-hand side does not match the system dimension");
        for (int i = 0; i < system.dim(); ++i) b(i, static_cast<int>(j)) = rhs[j][i];
    }
    const Eigen::MatrixXd x = solveDense(system, b, kind);
    for (std::size_t j = 0; j < rhs.size(); ++j)
        result[j].assign(x.col(static_cast<int>(j)).data(),
                         x.col(static_cast<int>(j)).data() + system.dim());
    return result;
}

} // namespace afem
