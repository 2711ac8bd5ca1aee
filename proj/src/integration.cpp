#include "afem/integration.hpp"

#include <algorithm>

namespace afem {

namespace {

Batched weightedEntitySum(const Batched& values, const QuadratureRule& qr,
                          const std::vector<double>& measure, std::span<const int> entities) {
    Batched out(values.components(), values.entities(), 1);
    for (int j = 0; j < values.entities(); ++j) {
        const double scale = measure[entities[j]];
        for (int i = 0; i < values.components(); ++i) {
            double s = 0.0;
            for (int k = 0; k < values.nodes(); ++k) s += qr.weights[k] * values(i, j, k);
            out(i, j, 0) = scale * s;
        }
    }
    return out;
}

} // namespace

Batched integrateElement(const Function& f, const QuadratureRule& qr,
                         std::span<const int> elements) {
    if (qr.dim() != 2) throw ShapeError("integrateElement: needs a 2D quadrature rule");
    const Batched values = f.eval(qr.nodes, elements);
    return weightedEntitySum(values, qr, f.mesh().affineData().area, elements);
}

Batched integrateElement(const Function& f, const QuadratureRule& qr) {
    const auto idx = allElementIndices(f.mesh());
    return integrateElement(f, qr, idx);
}

Batched integrateEdge(const Function& f, const QuadratureRule& qr, std::span<const int> edges) {
    if (qr.dim() != 1) throw ShapeError("integrateEdge: needs a 1D quadrature rule");
    const Batched values = f.evalEdge(qr.nodes, edges);
    return weightedEntitySum(values, qr, f.mesh().affineData().edgeLength, edges);
}

Batched integrateEdge(const Function& f, const QuadratureRule& qr) {
    const auto idx = allEdgeIndices(f.mesh());
    return integrateEdge(f, qr, idx);
}

namespace {

// Evaluate f from both sides of each edge and accumulate the signed
// difference nodewise. Edges are grouped by (local edge index, orientation)
// so that each group shares one set of element barycentric coordinates.
Batched nodewiseJump(const Function& f, const Barycentric& bary, std::span<const int> edges) {
    const Mesh& mesh = f.mesh();
    const int nPts = bary.numPoints();
    const int comps = f.components();
    Batched jump(comps, static_cast<int>(edges.size()), nPts);

    for (int side = 0; side < 2; ++side) {
        // group[j][oriented] = positions in the edge list
        std::array<std::array<std::vector<int>, 2>, 3> groups;
        std::array<std::array<std::vector<int>, 2>, 3> groupElems;
        for (std::size_t pos = 0; pos < edges.size(); ++pos) {
            const int e = edges[pos];
            const int t = mesh.edge2elements(e)[side];
            if (t < 0) continue; // boundary edge: only one side
            const auto& elemEdges = mesh.element2edges()[t];
            int j = 0;
            while (elemEdges[j] != e) ++j;
            const bool aligned = mesh.elements()[t][j] == mesh.edges()[e][0];
            groups[j][aligned].push_back(static_cast<int>(pos));
            groupElems[j][aligned].push_back(t);
        }
        for (int j = 0; j < 3; ++j)
            for (int aligned = 0; aligned < 2; ++aligned) {
                const auto& positions = groups[j][aligned];
                if (positions.empty()) continue;
                // The edge parameter l0 runs start -> end. Element-local edge
                // j runs vertex j -> vertex j+1; when the stored edge agrees
                // with that direction, vertex j carries the start weight.
                std::vector<double> data(3 * nPts, 0.0);
                for (int k = 0; k < nPts; ++k) {
                    const double t0 = bary(0, k);
                    const double wStart = 1.0 - t0, wEnd = t0;
                    data[3 * k + j] = aligned ? wStart : wEnd;
                    data[3 * k + (j + 1) % 3] = aligned ? wEnd : wStart;
                }
                const Barycentric groupBary(2, std::move(data));
                const Batched values = f.eval(groupBary, groupElems[j][aligned]);
                const double sign = side == 0 ? 1.0 : -1.0;
                for (std::size_t g = 0; g < positions.size(); ++g)
                    for (int k = 0; k < nPts; ++k)
                        for (int i = 0; i < comps; ++i)
                            jump(i, positions[g], k) += sign * values(i, static_cast<int>(g), k);
            }
    }
    return jump;
}

Batched integrateJumpImpl(const Function& f, const QuadratureRule& qr,
                          const std::vector<JumpPostProcess>& post, std::span<const int> edges,
                          bool contractNormal) {
    if (qr.dim() != 1) throw ShapeError("integrateJump: needs a 1D quadrature rule");
    const Mesh& mesh = f.mesh();
    std::vector<int> allEdges;
    if (edges.empty()) {
        allEdges = allEdgeIndices(mesh);
        edges = allEdges;
    }
    const int nPts = qr.numPoints();

    Batched jump = nodewiseJump(f, qr.nodes, edges);
    if (contractNormal) {
        if (f.components() != 2)
            throw ShapeError("integrateNormalJump: function must have two components");
        const auto& normals = mesh.affineData().unitNormal;
        Batched contracted(1, jump.entities(), nPts);
        for (int j = 0; j < jump.entities(); ++j) {
            const auto& n = normals[edges[j]];
            for (int k = 0; k < nPts; ++k)
                contracted(0, j, k) = n[0] * jump(0, j, k) + n[1] * jump(1, j, k);
        }
        jump = std::move(contracted);
    }

    // positions of global edges inside the integrated set
    std::vector<int> position(mesh.numEdges(), -1);
    for (std::size_t pos = 0; pos < edges.size(); ++pos) position[edges[pos]] = static_cast<int>(pos);

    for (const auto& step : post) {
        std::span<const int> stepEdges = step.edges;
        if (stepEdges.empty()) stepEdges = edges;
        std::vector<int> positions(stepEdges.size());
        for (std::size_t i = 0; i < stepEdges.size(); ++i) {
            if (stepEdges[i] < 0 || stepEdges[i] >= mesh.numEdges() ||
                position[stepEdges[i]] < 0)
                throw Error("integrateJump: post-processing edge outside the integrated set");
            positions[i] = position[stepEdges[i]];
        }

        std::vector<Batched> args;
        args.reserve(1 + step.args.size());
        Batched sub(jump.components(), static_cast<int>(positions.size()), nPts);
        for (std::size_t i = 0; i < positions.size(); ++i)
            for (int k = 0; k < nPts; ++k)
                for (int c = 0; c < jump.components(); ++c)
                    sub(c, static_cast<int>(i), k) = jump(c, positions[i], k);
        args.push_back(std::move(sub));
        for (const auto& a : step.args) args.push_back(a->evalEdge(qr.nodes, stepEdges));

        const Batched replaced = step.fn(args);
        if (replaced.components() != jump.components())
            throw ShapeError("integrateJump: post-processing step changed the component count");
        for (std::size_t i = 0; i < positions.size(); ++i)
            for (int k = 0; k < nPts; ++k)
                for (int c = 0; c < jump.components(); ++c)
                    jump(c, positions[i], k) = replaced.bc(c, static_cast<int>(i), k);
    }

    return weightedEntitySum(jump, qr, mesh.affineData().edgeLength, edges);
}

} // namespace

Batched integrateJump(const Function& f, const QuadratureRule& qr,
                      const std::vector<JumpPostProcess>& post, std::span<const int> edges) {
    return integrateJumpImpl(f, qr, post, edges, false);
}

Batched integrateNormalJump(const Function& f, const QuadratureRule& qr,
                            const std::vector<JumpPostProcess>& post,
                            std::span<const int> edges) {
    return integrateJumpImpl(f, qr, post, edges, true);
}

} // namespace afem
