#ifndef AFEM_FE_FUNCTION_HPP
#define AFEM_FE_FUNCTION_HPP

#include "afem/fe_space.hpp"
#include "afem/function.hpp"

namespace afem {

// Finite element function given by a global coefficient vector. Coefficients
// can be replaced in place, so forms holding this function as a coefficient
// see updates on the next assembly. All evaluations fail once the underlying
// mesh has been refined; transfer the data with a Prolongation and rebuild.
class FeFunction : public Function {
public:
    explicit FeFunction(std::shared_ptr<const FeSpace> space);

    const FeSpace& space() const { return *space_; }
    std::shared_ptr<const FeSpace> spacePtr() const { return space_; }

    const std::vector<double>& data() const { return data_; }
    void setData(std::vector<double> coefficients);
    void setData(double value);
    // writes only the free dofs, in freeDofs order; constrained dofs keep
    // their current values
    void setFreeData(std::span<const double> freeValues);

    const Mesh& mesh() const override { return space_->mesh(); }
    int components() const override { return 1; }
    Batched eval(const Barycentric& bary, std::span<const int> elements) const override;
    bool hasEdgeTrace() const override { return space_->element().conformity() == Conformity::H1; }
    Batched evalEdge(const Barycentric& bary, std::span<const int> edges) const override;

    Batched evalGradient(const Barycentric& bary, std::span<const int> elements) const;
    Batched evalHessian(const Barycentric& bary, std::span<const int> elements) const;

private:
    void requireCurrent() const { space_->requireCurrent(); }

    std::shared_ptr<const FeSpace> space_;
    std::vector<double> data_;
};

// Elementwise gradient of a finite element function; 2 components, no trace.
class Gradient : public Function {
public:
    explicit Gradient(std::shared_ptr<const FeFunction> u) : u_(std::move(u)) {}
    const Mesh& mesh() const override { return u_->mesh(); }
    int components() const override { return 2; }
    Batched eval(const Barycentric& bary, std::span<const int> elements) const override {
        return u_->evalGradient(bary, elements);
    }

private:
    std::shared_ptr<const FeFunction> u_;
};

// Elementwise Hessian; 4 components column-major, no trace.
class Hessian : public Function {
public:
    explicit Hessian(std::shared_ptr<const FeFunction> u) : u_(std::move(u)) {}
    const Mesh& mesh() const override { return u_->mesh(); }
    int components() const override { return 4; }
    std::pair<int, int> outputShape() const override { return {2, 2}; }
    Batched eval(const Barycentric& bary, std::span<const int> elements) const override {
        return u_->evalHessian(bary, elements);
    }

private:
    std::shared_ptr<const FeFunction> u_;
};

// Coefficients of the nodal interpolant: f sampled at the global Lagrange
// nodes; shared nodes take the value seen from the lowest-index adjacent
// element. f must be scalar and evaluable inside elements.
std::vector<double> nodalInterpolation(const Function& f, const FeSpace& space);

} // namespace afem

#endif
