#include "afem/fe_space.hpp"

#include <algorithm>

namespace afem {

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, FiniteElement element,
                 std::optional<std::vector<int>> dirichletParts)
    : mesh_(std::move(mesh)), element_(element), generation_(mesh_->generation()) {
    const int nV = mesh_->numVertices(), nE = mesh_->numEdges(), nT = mesh_->numElements();
    const int p = element_.order();
    const int nLoc = element_.localDofCount();

    if (dirichletParts) {
        dirichletParts_ = std::move(*dirichletParts);
        for (int part : dirichletParts_)
            if (part < 0 || part >= mesh_->numBoundaryParts())
                throw Error("FeSpace: unknown boundary part " + std::to_string(part));
    } else {
        dirichletParts_.resize(mesh_->numBoundaryParts());
        for (int i = 0; i < mesh_->numBoundaryParts(); ++i) dirichletParts_[i] = i;
    }

    element2dofs_.resize(static_cast<std::size_t>(nT) * nLoc);
    if (element_.conformity() == Conformity::L2) {
        numDofs_ = nT * nLoc;
        for (int t = 0; t < nT; ++t)
            for (int m = 0; m < nLoc; ++m) element2dofs_[t * nLoc + m] = t * nLoc + m;
        // no trace coupling: every dof is free
        freeMask_.assign(numDofs_, 1);
        freeDofs_.resize(numDofs_);
        for (int d = 0; d < numDofs_; ++d) freeDofs_[d] = d;
        return;
    }

    const int perEdge = p - 1;
    const int perElem = element_.interiorDofCount();
    numDofs_ = nV + nE * perEdge + nT * perElem;

    const auto& elements = mesh_->elements();
    const auto& element2edges = mesh_->element2edges();
    const auto& edges = mesh_->edges();
    for (int t = 0; t < nT; ++t) {
        int* dofs = element2dofs_.data() + static_cast<std::size_t>(t) * nLoc;
        dofs[0] = elements[t][0];
        dofs[1] = elements[t][1];
        dofs[2] = elements[t][2];
        int m = 3;
        for (int j = 0; j < 3; ++j) {
            const int e = element2edges[t][j];
            // local edge nodes walk from vertex j to vertex j+1; flip the
            // global slot when the stored edge points the other way
            const bool aligned = edges[e][0] == elements[t][j];
            for (int k = 1; k <= perEdge; ++k, ++m) {
                const int slot = aligned ? k - 1 : perEdge - k;
                dofs[m] = nV + e * perEdge + slot;
            }
        }
        for (int i = 0; i < perElem; ++i, ++m) dofs[m] = nV + nE * perEdge + t * perElem + i;
    }

    edge2dofs_.resize(static_cast<std::size_t>(nE) * (perEdge + 2));
    for (int e = 0; e < nE; ++e) {
        int* dofs = edge2dofs_.data() + static_cast<std::size_t>(e) * (perEdge + 2);
        dofs[0] = edges[e][0];
        dofs[1] = edges[e][1];
        for (int k = 0; k < perEdge; ++k) dofs[2 + k] = nV + e * perEdge + k;
    }

    // a dof is constrained when its Lagrange node lies on a closed Dirichlet
    // edge; vertices shared with other parts count as Dirichlet
    freeMask_.assign(numDofs_, 1);
    for (int part : dirichletParts_)
        for (int e : mesh_->boundaries()[part]) {
            freeMask_[edges[e][0]] = 0;
            freeMask_[edges[e][1]] = 0;
            for (int k = 0; k < perEdge; ++k) freeMask_[nV + e * perEdge + k] = 0;
        }
    freeDofs_.reserve(numDofs_);
    for (int d = 0; d < numDofs_; ++d)
        if (freeMask_[d]) freeDofs_.push_back(d);
}

std::span<const int> FeSpace::edgeDofs(int edge) const {
    if (element_.conformity() != Conformity::H1)
        throw NoEdgeTraceError("FeSpace: discontinuous family has no edge dofs");
    const int n = element_.order() + 1;
    return {edge2dofs_.data() + static_cast<std::size_t>(edge) * n, static_cast<std::size_t>(n)};
}

} // namespace afem
