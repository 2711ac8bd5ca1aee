#ifndef AFEM_FUNCTION_HPP
#define AFEM_FUNCTION_HPP

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "afem/batched.hpp"
#include "afem/mesh.hpp"
#include "afem/quadrature.hpp"

namespace afem {

// Evaluation interface for functions over a mesh. eval returns a batch
// (component, element, node) of values at the points with the given
// barycentric coordinates in each requested element; evalEdge is the
// analogue along edges and only exists for functions with a well-defined
// trace. All integration, interpolation, and assembly routines are written
// against this interface, so coefficients can be composed freely.
class Function {
public:
    virtual ~Function() = default;

    virtual const Mesh& mesh() const = 0;
    virtual int components() const = 0;
    // pointwise value shape; matrices are column-major along components
    virtual std::pair<int, int> outputShape() const { return {components(), 1}; }

    virtual Batched eval(const Barycentric& bary, std::span<const int> elements) const = 0;

    virtual bool hasEdgeTrace() const { return false; }
    virtual Batched evalEdge(const Barycentric& bary, std::span<const int> edges) const;

    // convenience: evaluate on all elements
    Batched eval(const Barycentric& bary) const;
};

using FunctionPtr = std::shared_ptr<const Function>;

// Pointwise combinator used by composite functions and by jump
// post-processing; receives the evaluated argument batches.
using Combinator = std::function<Batched(std::span<const Batched>)>;

class Constant : public Function {
public:
    Constant(std::shared_ptr<const Mesh> mesh, double value);
    Constant(std::shared_ptr<const Mesh> mesh, std::vector<double> values, int rows, int cols);

    const Mesh& mesh() const override { return *mesh_; }
    int components() const override { return static_cast<int>(values_.size()); }
    std::pair<int, int> outputShape() const override { return {rows_, cols_}; }
    Batched eval(const Barycentric& bary, std::span<const int> elements) const override;
    bool hasEdgeTrace() const override { return true; }
    Batched evalEdge(const Barycentric& bary, std::span<const int> edges) const override;

private:
    std::shared_ptr<const Mesh> mesh_;
    std::vector<double> values_;
    int rows_, cols_;
};

// Closure over Cartesian coordinates.
class SpatialFunction : public Function {
public:
    using Fn = std::function<void(double x, double y, std::span<double> out)>;

    SpatialFunction(std::shared_ptr<const Mesh> mesh, int components, Fn fn);
    static std::shared_ptr<SpatialFunction> scalar(std::shared_ptr<const Mesh> mesh,
                                                   std::function<double(double, double)> fn);

    const Mesh& mesh() const override { return *mesh_; }
    int components() const override { return components_; }
    Batched eval(const Barycentric& bary, std::span<const int> elements) const override;
    bool hasEdgeTrace() const override { return true; }
    Batched evalEdge(const Barycentric& bary, std::span<const int> edges) const override;

private:
    std::shared_ptr<const Mesh> mesh_;
    int components_;
    Fn fn_;
};

// Pointwise combination of other functions. All arguments are evaluated on
// the identical (barycentric, index set) batch before the combinator runs.
class CompositeFunction : public Function {
public:
    CompositeFunction(Combinator fn, std::vector<FunctionPtr> args, int components,
                      int rows = -1, int cols = 1);

    const Mesh& mesh() const override { return args_.front()->mesh(); }
    int components() const override { return components_; }
    std::pair<int, int> outputShape() const override { return {rows_, cols_}; }
    Batched eval(const Barycentric& bary, std::span<const int> elements) const override;
    bool hasEdgeTrace() const override;
    Batched evalEdge(const Barycentric& bary, std::span<const int> edges) const override;

private:
    Batched apply(std::vector<Batched> argValues, int entities, int nodes) const;

    Combinator fn_;
    std::vector<FunctionPtr> args_;
    int components_, rows_, cols_;
};

std::vector<int> allElementIndices(const Mesh& mesh);
std::vector<int> allEdgeIndices(const Mesh& mesh);

} // namespace afem

#endif
