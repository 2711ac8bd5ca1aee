#include "afem/function.hpp"

#include <numeric>

namespace afem {

std::vector<int> allElementIndices(const Mesh& mesh) {
    std::vector<int> idx(mesh.numElements());
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

std::vector<int> allEdgeIndices(const Mesh& mesh) {
    std::vector<int> idx(mesh.numEdges());
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

Batched Function::evalEdge(const Barycentric&, std::span<const int>) const {
    throw NoEdgeTraceError("Function: no edge trace for this function");
}

Batched Function::eval(const Barycentric& bary) const {
    const auto idx = allElementIndices(mesh());
    return eval(bary, idx);
}

// ---------------------------------------------------------------- Constant

Constant::Constant(std::shared_ptr<const Mesh> mesh, double value)
    : mesh_(std::move(mesh)), values_{value}, rows_(1), cols_(1) {}

Constant::Constant(std::shared_ptr<const Mesh> mesh, std::vector<double> values, int rows,
                   int cols)
    : mesh_(std::move(mesh)), values_(std::move(values)), rows_(rows), cols_(cols) {
    if (rows_ * cols_ != static_cast<int>(values_.size()))
        throw ShapeError("Constant: shape does not match value count");
}

Batched Constant::eval(const Barycentric& bary, std::span<const int> elements) const {
    Batched out(components(), static_cast<int>(elements.size()), bary.numPoints());
    for (int k = 0; k < out.nodes(); ++k)
        for (int j = 0; j < out.entities(); ++j)
            for (int i = 0; i < out.components(); ++i) out(i, j, k) = values_[i];
    return out;
}

Batched Constant::evalEdge(const Barycentric& bary, std::span<const int> edges) const {
    Batched out(components(), static_cast<int>(edges.size()), bary.numPoints());
    for (int k = 0; k < out.nodes(); ++k)
        for (int j = 0; j < out.entities(); ++j)
            for (int i = 0; i < out.components(); ++i) out(i, j, k) = values_[i];
    return out;
}

// --------------------------------------------------------- SpatialFunction

SpatialFunction::SpatialFunction(std::shared_ptr<const Mesh> mesh, int components, Fn fn)
    : mesh_(std::move(mesh)), components_(components), fn_(std::move(fn)) {
    if (components_ < 1) throw ShapeError("SpatialFunction: needs at least one component");
}

std::shared_ptr<SpatialFunction> SpatialFunction::scalar(
    std::shared_ptr<const Mesh> mesh, std::function<double(double, double)> fn) {
    return std::make_shared<SpatialFunction>(
        std::move(mesh), 1,
        [fn = std::move(fn)](double x, double y, std::span<double> out) { out[0] = fn(x, y); });
}

Batched SpatialFunction::eval(const Barycentric& bary, std::span<const int> elements) const {
    const auto& coords = mesh_->coordinates();
    const auto& elems = mesh_->elements();
    Batched out(components_, static_cast<int>(elements.size()), bary.numPoints());
    std::vector<double> buffer(components_);
    for (int k = 0; k < bary.numPoints(); ++k) {
        const double l0 = bary(0, k), l1 = bary(1, k), l2 = bary(2, k);
        for (std::size_t j = 0; j < elements.size(); ++j) {
            const auto& el = elems[elements[j]];
            const double x = l0 * coords[el[0]][0] + l1 * coords[el[1]][0] + l2 * coords[el[2]][0];
            const double y = l0 * coords[el[0]][1] + l1 * coords[el[1]][1] + l2 * coords[el[2]][1];
            fn_(x, y, buffer);
            for (int i = 0; i < components_; ++i) out(i, static_cast<int>(j), k) = buffer[i];
        }
    }
    return out;
}

Batched SpatialFunction::evalEdge(const Barycentric& bary, std::span<const int> edges) const {
    const auto& coords = mesh_->coordinates();
    const auto& edgeList = mesh_->edges();
    Batched out(components_, static_cast<int>(edges.size()), bary.numPoints());
    std::vector<double> buffer(components_);
    for (int k = 0; k < bary.numPoints(); ++k) {
        // parameter l0 runs from the edge start (0) to its end (1)
        const double t = bary(0, k);
        for (std::size_t j = 0; j < edges.size(); ++j) {
            const auto& e = edgeList[edges[j]];
            const double x = (1.0 - t) * coords[e[0]][0] + t * coords[e[1]][0];
            const double y = (1.0 - t) * coords[e[0]][1] + t * coords[e[1]][1];
            fn_(x, y, buffer);
            for (int i = 0; i < components_; ++i) out(i, static_cast<int>(j), k) = buffer[i];
        }
    }
    return out;
}

// ------------------------------------------------------- CompositeFunction

CompositeFunction::CompositeFunction(Combinator fn, std::vector<FunctionPtr> args, int components,
                                     int rows, int cols)
    : fn_(std::move(fn)), args_(std::move(args)), components_(components),
      rows_(rows < 0 ? components : rows), cols_(cols) {
    if (args_.empty()) throw Error("CompositeFunction: needs at least one argument");
    for (const auto& a : args_)
        if (&a->mesh() != &args_.front()->mesh())
            throw Error("CompositeFunction: arguments live on different meshes");
}

Batched CompositeFunction::apply(std::vector<Batched> argValues, int entities, int nodes) const {
    Batched result = fn_(argValues);
    if (result.components() != components_)
        throw ShapeError("CompositeFunction: combinator returned " +
                         std::to_string(result.components()) + " components, declared " +
                         std::to_string(components_));
    if ((result.entities() != entities && result.entities() != 1) ||
        (result.nodes() != nodes && result.nodes() != 1))
        throw ShapeError("CompositeFunction: combinator changed the batch extent");
    return result;
}

Batched CompositeFunction::eval(const Barycentric& bary, std::span<const int> elements) const {
    std::vector<Batched> values;
    values.reserve(args_.size());
    for (const auto& a : args_) values.push_back(a->eval(bary, elements));
    return apply(std::move(values), static_cast<int>(elements.size()), bary.numPoints());
}

bool CompositeFunction::hasEdgeTrace() const {
    for (const auto& a : args_)
        if (!a->hasEdgeTrace()) return false;
    return true;
}

Batched CompositeFunction::evalEdge(const Barycentric& bary, std::span<const int> edges) const {
    std::vector<Batched> values;
    values.reserve(args_.size());
    for (const auto& a : args_) values.push_back(a->evalEdge(bary, edges));
    return apply(std::move(values), static_cast<int>(edges.size()), bary.numPoints());
}

} // namespace afem
