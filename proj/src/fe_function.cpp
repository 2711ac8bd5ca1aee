#include "afem/fe_function.hpp"

namespace afem {

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space)
    : space_(std::move(space)), data_(space_->numDofs(), 0.0) {}

void FeFunction::setData(std::vector<double> coefficients) {
    if (coefficients.size() != data_.size())
        throw ShapeError("FeFunction::setData: expected " + std::to_string(data_.size()) +
                         " coefficients, got " + std::to_string(coefficients.size()));
    data_ = std::move(coefficients);
}

void FeFunction::setData(double value) { std::fill(data_.begin(), data_.end(), value); }

void FeFunction::setFreeData(std::span<const double> freeValues) {
    const auto& free = space_->freeDofs();
    if (freeValues.size() != free.size())
        throw ShapeError("FeFunction::setFreeData: expected " + std::to_string(free.size()) +
                         " values, got " + std::to_string(freeValues.size()));
    for (std::size_t i = 0; i < free.size(); ++i) data_[free[i]] = freeValues[i];
}

Batched FeFunction::eval(const Barycentric& bary, std::span<const int> elements) const {
    requireCurrent();
    const Batched basis = space_->element().evalValues(bary); // (1, nLoc, nPts)
    const int nLoc = basis.entities(), nPts = basis.nodes();
    Batched out(1, static_cast<int>(elements.size()), nPts);
    for (std::size_t j = 0; j < elements.size(); ++j) {
        const auto dofs = space_->elementDofs(elements[j]);
        for (int k = 0; k < nPts; ++k) {
            double s = 0.0;
            for (int m = 0; m < nLoc; ++m) s += data_[dofs[m]] * basis(0, m, k);
            out(0, static_cast<int>(j), k) = s;
        }
    }
    return out;
}

Batched FeFunction::evalGradient(const Barycentric& bary, std::span<const int> elements) const {
    requireCurrent();
    const Batched gradRef = space_->element().evalGradients(bary); // (2, nLoc, nPts)
    const int nLoc = gradRef.entities(), nPts = gradRef.nodes();
    const auto& dfInvT = space_->mesh().affineData().dfInvT;
    Batched out(2, static_cast<int>(elements.size()), nPts);
    for (std::size_t j = 0; j < elements.size(); ++j) {
        const auto dofs = space_->elementDofs(elements[j]);
        const auto& m = dfInvT[elements[j]]; // column-major (m11, m21, m12, m22)
        for (int k = 0; k < nPts; ++k) {
            double gx = 0.0, gy = 0.0;
            for (int a = 0; a < nLoc; ++a) {
                gx += data_[dofs[a]] * gradRef(0, a, k);
                gy += data_[dofs[a]] * gradRef(1, a, k);
            }
            out(0, static_cast<int>(j), k) = m[0] * gx + m[2] * gy;
            out(1, static_cast<int>(j), k) = m[1] * gx + m[3] * gy;
        }
    }
    return out;
}

Batched FeFunction::evalHessian(const Barycentric& bary, std::span<const int> elements) const {
    requireCurrent();
    const Batched hessRef = space_->element().evalHessians(bary); // (4, nLoc, nPts)
    const int nLoc = hessRef.entities(), nPts = hessRef.nodes();
    const auto& dfInvT = space_->mesh().affineData().dfInvT;
    Batched out(4, static_cast<int>(elements.size()), nPts);
    for (std::size_t j = 0; j < elements.size(); ++j) {
        const auto dofs = space_->elementDofs(elements[j]);
        const auto& m = dfInvT[elements[j]];
        for (int k = 0; k < nPts; ++k) {
            double h11 = 0.0, h12 = 0.0, h22 = 0.0;
            for (int a = 0; a < nLoc; ++a) {
                h11 += data_[dofs[a]] * hessRef(0, a, k);
                h12 += data_[dofs[a]] * hessRef(1, a, k);
                h22 += data_[dofs[a]] * hessRef(3, a, k);
            }
            // M H M^T for the affine pullback, M = dfInvT
            const double a11 = m[0] * h11 + m[2] * h12, a12 = m[0] * h12 + m[2] * h22;
            const double a21 = m[1] * h11 + m[3] * h12, a22 = m[1] * h12 + m[3] * h22;
            out(0, static_cast<int>(j), k) = a11 * m[0] + a12 * m[2];
            out(1, static_cast<int>(j), k) = a21 * m[0] + a22 * m[2];
            out(2, static_cast<int>(j), k) = a11 * m[1] + a12 * m[3];
            out(3, static_cast<int>(j), k) = a21 * m[1] + a22 * m[3];
        }
    }
    return out;
}

Batched FeFunction::evalEdge(const Barycentric& bary, std::span<const int> edges) const {
    requireCurrent();
    if (!hasEdgeTrace())
        throw NoEdgeTraceError("FeFunction: discontinuous function has no edge trace");
    const Batched trace = space_->element().evalEdgeValues(bary); // (1, p+1, nPts)
    const int n = trace.entities(), nPts = trace.nodes();
    Batched out(1, static_cast<int>(edges.size()), nPts);
    for (std::size_t j = 0; j < edges.size(); ++j) {
        const auto dofs = space_->edgeDofs(edges[j]);
        for (int k = 0; k < nPts; ++k) {
            double s = 0.0;
            for (int m = 0; m < n; ++m) s += data_[dofs[m]] * trace(0, m, k);
            out(0, static_cast<int>(j), k) = s;
        }
    }
    return out;
}

std::vector<double> nodalInterpolation(const Function& f, const FeSpace& space) {
    space.requireCurrent();
    if (f.components() != 1)
        throw ShapeError("nodalInterpolation: interpolated function must be scalar");
    const Barycentric nodes = space.element().nodes();
    const Batched values = f.eval(nodes, allElementIndices(space.mesh()));
    const int nLoc = space.element().localDofCount();
    std::vector<double> coefficients(space.numDofs(), 0.0);
    std::vector<char> written(space.numDofs(), 0);
    for (int t = 0; t < space.mesh().numElements(); ++t) {
        const auto dofs = space.elementDofs(t);
        for (int m = 0; m < nLoc; ++m) {
            if (written[dofs[m]]) continue;
            written[dofs[m]] = 1;
            coefficients[dofs[m]] = values(0, t, m);
        }
    }
    return coefficients;
}

} // namespace afem
