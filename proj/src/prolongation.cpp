#include "afem/prolongation.hpp"

#include <algorithm>
#include <cmath>

namespace afem {

namespace {

// barycentric coordinates (w.r.t. the parent) of the local refinement points
constexpr std::array<std::array<double, 3>, 7> kLocalBary{{
    {1, 0, 0},
    {0, 1, 0},
    {0, 0, 1},
    {0.5, 0.5, 0},
    {0, 0.5, 0.5},
    {0.5, 0, 0.5},
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
}};

constexpr std::array<int, 3> kIdentityChild{0, 1, 2};

} // namespace

void Prolongation::validate(const FeSpace& coarse, const FeSpace& fine,
                            const RefinementRecord& record) {
    if (coarse.meshGeneration() != record.generationBefore)
        throw StaleDataError("Prolongation: coarse space does not match the refinement record");
    if (fine.meshGeneration() != record.generationAfter || !fine.isCurrent())
        throw StaleDataError("Prolongation: fine space does not match the refined mesh");
    if (coarse.element().conformity() != fine.element().conformity() ||
        coarse.element().order() != fine.element().order())
        throw Error("Prolongation: spaces use different elements");
}

void Prolongation::setRow(int r, std::span<const int> cols, std::span<const double> vals) {
    if (r != rows()) throw Error("Prolongation: rows must be set in order");
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (std::abs(vals[i]) < 1e-14) continue;
        colIdx_.push_back(cols[i]);
        values_.push_back(vals[i]);
    }
    rowPtr_.push_back(static_cast<int>(colIdx_.size()));
}

std::vector<std::pair<int, double>> Prolongation::row(int r) const {
    std::vector<std::pair<int, double>> out;
    for (int i = rowPtr_[r]; i < rowPtr_[r + 1]; ++i) out.push_back({colIdx_[i], values_[i]});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> Prolongation::apply(std::span<const double> coarse) const {
    if (static_cast<int>(coarse.size()) != cols_)
        throw ShapeError("Prolongation: coefficient vector does not match the coarse space");
    std::vector<double> fine(rows(), 0.0);
    for (int r = 0; r < rows(); ++r) {
        double s = 0.0;
        for (int i = rowPtr_[r]; i < rowPtr_[r + 1]; ++i) s += values_[i] * coarse[colIdx_[i]];
        fine[r] = s;
    }
    return fine;
}

Prolongation Prolongation::lowestOrder(const FeSpace& coarse, const FeSpace& fine,
                                       const RefinementRecord& record) {
    validate(coarse, fine, record);
    const auto& fe = coarse.element();
    Prolongation P(coarse.numDofs());

    // The dof maps of the coarse space describe the mesh before refinement,
    // so coarse edge endpoints and element vertices are read from there.
    if (fe.conformity() == Conformity::H1 && fe.order() == 1) {
        std::vector<std::vector<int>> cols(fine.numDofs());
        std::vector<std::vector<double>> vals(fine.numDofs());
        for (int v = 0; v < record.oldNumVertices; ++v) {
            cols[record.vertexMap[v]] = {v};
            vals[record.vertexMap[v]] = {1.0};
        }
        for (int e = 0; e < record.oldNumEdges; ++e) {
            const int m = record.edgeMidpoint[e];
            if (m < 0) continue;
            const auto ends = coarse.edgeDofs(e);
            cols[m] = {ends[0], ends[1]};
            vals[m] = {0.5, 0.5};
        }
        for (int t = 0; t < record.oldNumElements; ++t) {
            const int m = record.interiorVertex[t];
            if (m < 0) continue;
            const auto verts = coarse.elementDofs(t);
            cols[m] = {verts[0], verts[1], verts[2]};
            vals[m] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        }
        for (int r = 0; r < fine.numDofs(); ++r) P.setRow(r, cols[r], vals[r]);
        return P;
    }

    if (fe.conformity() == Conformity::L2 && fe.order() == 0) {
        for (int t = 0; t < record.oldNumElements; ++t)
            for (int c = 0; c < record.childrenCount[t]; ++c) {
                const double one = 1.0;
                P.setRow(record.childrenStart[t] + c, std::span<const int>(&t, 1),
                         std::span<const double>(&one, 1));
            }
        return P;
    }

    throw Error("Prolongation::lowestOrder: only order-1 H1 and order-0 L2 elements");
}

Prolongation Prolongation::general(const FeSpace& coarse, const FeSpace& fine,
                                   const RefinementRecord& record) {
    validate(coarse, fine, record);
    const auto& fe = coarse.element();
    const int nLoc = fe.localDofCount();
    const Barycentric fineNodes = fe.nodes();
    const int nNodes = fineNodes.numPoints();

    Prolongation P(coarse.numDofs());
    std::vector<std::vector<int>> cols(fine.numDofs());
    std::vector<std::vector<double>> vals(fine.numDofs());
    std::vector<char> written(fine.numDofs(), 0);

    for (int t = 0; t < record.oldNumElements; ++t) {
        const auto& rule = BisectionRule::get(record.elementRule[t]);
        const auto coarseDofs = coarse.elementDofs(t);
        for (int c = 0; c < record.childrenCount[t]; ++c) {
            const std::array<int, 3>& childVerts =
                rule.children.empty() ? kIdentityChild : rule.children[c];
            // fine Lagrange nodes expressed in parent barycentric coordinates
            std::vector<double> parentBary(3 * nNodes);
            for (int m = 0; m < nNodes; ++m)
                for (int i = 0; i < 3; ++i)
                    parentBary[3 * m + i] = fineNodes(0, m) * kLocalBary[childVerts[0]][i] +
                                            fineNodes(1, m) * kLocalBary[childVerts[1]][i] +
                                            fineNodes(2, m) * kLocalBary[childVerts[2]][i];
            const Batched basis = fe.evalValues(Barycentric(2, std::move(parentBary)));
            const auto fineDofs = fine.elementDofs(record.childrenStart[t] + c);
            for (int m = 0; m < nNodes; ++m) {
                const int r = fineDofs[m];
                if (written[r]) continue;
                written[r] = 1;
                for (int a = 0; a < nLoc; ++a) {
                    cols[r].push_back(coarseDofs[a]);
                    vals[r].push_back(basis(0, a, m));
                }
            }
        }
    }
    for (int r = 0; r < fine.numDofs(); ++r) P.setRow(r, cols[r], vals[r]);
    return P;
}

} // namespace afem
