#include "afem/assembly.hpp"

#include <algorithm>

namespace afem {

namespace {

QuadratureRule defaultVolumeRule(const std::optional<QuadratureRule>& qr, int order) {
    if (qr) {
        if (qr->dim() != 2) throw ShapeError("assemble: volume term needs a 2D quadrature rule");
        return *qr;
    }
    return QuadratureRule::ofOrder(std::max(order, 1), 2);
}

QuadratureRule defaultEdgeRule(const std::optional<QuadratureRule>& qr, int order) {
    if (qr) {
        if (qr->dim() != 1) throw ShapeError("assemble: boundary term needs a 1D quadrature rule");
        return *qr;
    }
    return QuadratureRule::ofOrder(std::max(order, 1), 1);
}

void requireComponents(const Function& f, std::initializer_list<int> allowed, const char* slot) {
    for (int n : allowed)
        if (f.components() == n) return;
    throw ShapeError(std::string("assemble: coefficient '") + slot + "' has " +
                     std::to_string(f.components()) + " components");
}

// physical basis gradients (2, nT, nQ) per local basis function
std::vector<Batched> physicalGradients(const FeSpace& space, const QuadratureRule& qr) {
    const Mesh& mesh = space.mesh();
    const int nT = mesh.numElements();
    const Batched gradRef = space.element().evalGradients(qr.nodes); // (2, nLoc, nQ)
    const auto& dfInvT = mesh.affineData().dfInvT;
    Batched trafo(4, nT, 1);
    for (int t = 0; t < nT; ++t)
        for (int i = 0; i < 4; ++i) trafo(i, t, 0) = dfInvT[t][i];
    std::vector<Batched> result;
    const int nLoc = gradRef.entities();
    result.reserve(nLoc);
    for (int a = 0; a < nLoc; ++a) {
        Batched g(2, 1, qr.numPoints());
        for (int k = 0; k < qr.numPoints(); ++k) {
            g(0, 0, k) = gradRef(0, a, k);
            g(1, 0, k) = gradRef(1, a, k);
        }
        result.push_back(vectorProduct(trafo, g, {2, 2, false}, {2, 1, false}));
    }
    return result;
}

// basis values as (1, 1, nQ) batches per local basis function
std::vector<Batched> basisValueBatches(const FeSpace& space, const QuadratureRule& qr) {
    const Batched values = space.element().evalValues(qr.nodes);
    std::vector<Batched> result;
    result.reserve(values.entities());
    for (int a = 0; a < values.entities(); ++a) {
        Batched v(1, 1, qr.numPoints());
        for (int k = 0; k < qr.numPoints(); ++k) v(0, 0, k) = values(0, a, k);
        result.push_back(std::move(v));
    }
    return result;
}

// integrate a (1, nT, nQ) integrand batch elementwise: area * weighted sum
void accumulateMatrixTerm(SparseSystem& system, const FeSpace& space, const QuadratureRule& qr,
                          const Batched& integrand, int testLocal, int trialLocal) {
    const auto& area = space.mesh().affineData().area;
    const int nT = integrand.entities();
    for (int t = 0; t < nT; ++t) {
        double s = 0.0;
        for (int k = 0; k < qr.numPoints(); ++k) s += qr.weights[k] * integrand.bc(0, t, k);
        const auto dofs = space.elementDofs(t);
        system.accumulate(dofs[testLocal], dofs[trialLocal], area[t] * s);
    }
}

std::vector<int> partEdges(const Mesh& mesh, std::span<const int> parts, const char* slot) {
    if (parts.empty())
        throw Error(std::string("assemble: boundary term '") + slot +
                    "' needs an explicit boundary part selection");
    std::vector<int> edges;
    for (int p : parts) {
        if (p < 0 || p >= mesh.numBoundaryParts())
            throw Error("assemble: unknown boundary part " + std::to_string(p));
        edges.insert(edges.end(), mesh.boundaries()[p].begin(), mesh.boundaries()[p].end());
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

} // namespace

SparseSystem assemble(const BilinearForm& form, const FeSpace& space) {
    space.requireCurrent();
    if (!form.a && !form.b && !form.c && !form.robin)
        throw Error("assemble: empty bilinear form");
    const int p = space.element().order();
    const int nLoc = space.element().localDofCount();
    SparseSystem system(space.numDofs(), form.b == nullptr);

    if (form.a) {
        requireComponents(*form.a, {1, 4}, "a");
        const QuadratureRule qr = defaultVolumeRule(form.qra, 2 * p - 2);
        const Batched coeff = form.a->eval(qr.nodes);
        const auto grads = physicalGradients(space, qr);
        for (int j = 0; j < nLoc; ++j) { // trial
            const Batched flux = coeff.components() == 4
                                     ? vectorProduct(coeff, grads[j], {2, 2, false}, {2, 1, false})
                                     : coeff * grads[j];
            for (int i = 0; i < nLoc; ++i) // test
                accumulateMatrixTerm(system, space, qr, vectorProduct(grads[i], flux), i, j);
        }
    }
    if (form.b) {
        requireComponents(*form.b, {2}, "b");
        const QuadratureRule qr = defaultVolumeRule(form.qrb, 2 * p);
        const Batched coeff = form.b->eval(qr.nodes);
        const auto grads = physicalGradients(space, qr);
        const auto values = basisValueBatches(space, qr);
        for (int j = 0; j < nLoc; ++j) {
            const Batched directional = vectorProduct(coeff, grads[j]);
            for (int i = 0; i < nLoc; ++i)
                accumulateMatrixTerm(system, space, qr, directional * values[i], i, j);
        }
    }
    if (form.c) {
        requireComponents(*form.c, {1}, "c");
        const QuadratureRule qr = defaultVolumeRule(form.qrc, 2 * p);
        const Batched coeff = form.c->eval(qr.nodes);
        const auto values = basisValueBatches(space, qr);
        for (int j = 0; j < nLoc; ++j) {
            const Batched scaled = coeff * values[j];
            for (int i = 0; i < nLoc; ++i)
                accumulateMatrixTerm(system, space, qr, scaled * values[i], i, j);
        }
    }
    if (form.robin) {
        requireComponents(*form.robin, {1}, "robin");
        const QuadratureRule qr = defaultEdgeRule(form.qrRobin, 2 * p);
        const auto edges = partEdges(space.mesh(), form.robinParts, "robin");
        if (!edges.empty()) {
            const Batched coeff = form.robin->evalEdge(qr.nodes, edges);
            const Batched trace = space.element().evalEdgeValues(qr.nodes); // (1, p+1, nQ)
            const auto& length = space.mesh().affineData().edgeLength;
            const int nTrace = trace.entities();
            for (std::size_t pos = 0; pos < edges.size(); ++pos) {
                const auto dofs = space.edgeDofs(edges[pos]);
                for (int m = 0; m < nTrace; ++m)
                    for (int n = 0; n < nTrace; ++n) {
                        double s = 0.0;
                        for (int k = 0; k < qr.numPoints(); ++k)
                            s += qr.weights[k] * coeff(0, static_cast<int>(pos), k) *
                                 trace(0, m, k) * trace(0, n, k);
                        system.accumulate(dofs[m], dofs[n], length[edges[pos]] * s);
                    }
            }
        }
    }
    return system;
}

std::vector<double> assemble(const LinearForm& form, const FeSpace& space) {
    space.requireCurrent();
    if (!form.f && !form.fvec && !form.neumann && !form.robin)
        throw Error("assemble: empty linear form");
    const int p = space.element().order();
    const int nLoc = space.element().localDofCount();
    const auto& area = space.mesh().affineData().area;
    std::vector<double> rhs(space.numDofs(), 0.0);

    auto accumulateVector = [&](const QuadratureRule& qr, const Batched& integrand, int local) {
        for (int t = 0; t < integrand.entities(); ++t) {
            double s = 0.0;
            for (int k = 0; k < qr.numPoints(); ++k) s += qr.weights[k] * integrand.bc(0, t, k);
            rhs[space.elementDofs(t)[local]] += area[t] * s;
        }
    };

    if (form.f) {
        requireComponents(*form.f, {1}, "f");
        const QuadratureRule qr = defaultVolumeRule(form.qrf, 2 * p);
        const Batched coeff = form.f->eval(qr.nodes);
        const auto values = basisValueBatches(space, qr);
        for (int i = 0; i < nLoc; ++i) accumulateVector(qr, coeff * values[i], i);
    }
    if (form.fvec) {
        requireComponents(*form.fvec, {2}, "fvec");
        const QuadratureRule qr = defaultVolumeRule(form.qrfvec, 2 * p - 1);
        const Batched coeff = form.fvec->eval(qr.nodes);
        const auto grads = physicalGradients(space, qr);
        for (int i = 0; i < nLoc; ++i) accumulateVector(qr, vectorProduct(coeff, grads[i]), i);
    }

    auto accumulateBoundary = [&](const Function& data, const QuadratureRule& qr,
                                  std::span<const int> parts, const char* slot) {
        requireComponents(data, {1}, slot);
        const auto edges = partEdges(space.mesh(), parts, slot);
        if (edges.empty()) return;
        const Batched coeff = data.evalEdge(qr.nodes, edges);
        const Batched trace = space.element().evalEdgeValues(qr.nodes);
        const auto& length = space.mesh().affineData().edgeLength;
        for (std::size_t pos = 0; pos < edges.size(); ++pos) {
            const auto dofs = space.edgeDofs(edges[pos]);
            for (int m = 0; m < trace.entities(); ++m) {
                double s = 0.0;
                for (int k = 0; k < qr.numPoints(); ++k)
                    s += qr.weights[k] * coeff(0, static_cast<int>(pos), k) * trace(0, m, k);
                rhs[dofs[m]] += length[edges[pos]] * s;
            }
        }
    };

    if (form.neumann)
        accumulateBoundary(*form.neumann, defaultEdgeRule(form.qrNeumann, 2 * p),
                           form.neumannParts, "neumann");
    if (form.robin)
        accumulateBoundary(*form.robin, defaultEdgeRule(form.qrRobin, 2 * p), form.robinParts,
                           "robin");
    return rhs;
}

} // namespace afem
