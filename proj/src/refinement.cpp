#include "afem/refinement.hpp"

#include <algorithm>

namespace afem {

// Child tables in local indices (see header), with the refinement edge of the
// parent at the bottom (vertices 0 -> 1). Interior cuts per rule:
//   Bisec1:   3-2
//   Bisec12:  3-2, 3-4
//   Bisec13:  3-2, 3-5
//   Bisec123: 3-2, 3-4, 3-5
//   Bisec5:   3-6, 4-6, 5-6, 3-4, 3-5 (6 = centroid)
//   BisecRed: 3-4, 4-5, 5-3
// Each child is listed with its own refinement edge first: the split halves
// of the parent refinement edge keep bisecting toward the new vertex 3, the
// upper children of the NVB rules use the cut through 3, and the red rule
// hands the central parallel edge 4-5 to both inner children.
const BisectionRule& BisectionRule::get(Bisection b) {
    static const BisectionRule none{{}, {false, false, false}, false};
    static const BisectionRule bisec1{
        {{2, 0, 3}, {1, 2, 3}}, {true, false, false}, false};
    static const BisectionRule bisec12{
        {{2, 0, 3}, {3, 1, 4}, {2, 3, 4}}, {true, true, false}, false};
    static const BisectionRule bisec13{
        {{1, 2, 3}, {0, 3, 5}, {3, 2, 5}}, {true, false, true}, false};
    static const BisectionRule bisec123{
        {{0, 3, 5}, {3, 1, 4}, {3, 2, 5}, {2, 3, 4}}, {true, true, true}, false};
    static const BisectionRule bisec5{
        {{0, 3, 5}, {3, 1, 4}, {3, 4, 6}, {4, 2, 6}, {2, 5, 6}, {5, 3, 6}},
        {true, true, true},
        true};
    static const BisectionRule bisecRed{
        {{0, 3, 5}, {3, 1, 4}, {4, 5, 3}, {5, 4, 2}}, {true, true, true}, false};
    switch (b) {
    case Bisection::None: return none;
    case Bisection::Bisec1: return bisec1;
    case Bisection::Bisec12: return bisec12;
    case Bisection::Bisec13: return bisec13;
    case Bisection::Bisec123: return bisec123;
    case Bisection::Bisec5: return bisec5;
    case Bisection::BisecRed: return bisecRed;
    }
    throw Error("BisectionRule::get: unknown bisection");
}

RefinementStrategy strategyFromName(const std::string& name) {
    if (name == "nvb1") return RefinementStrategy::Nvb1;
    if (name == "nvb" || name == "nvb3") return RefinementStrategy::Nvb3;
    if (name == "nvb5") return RefinementStrategy::Nvb5;
    if (name == "rgb") return RefinementStrategy::Rgb;
    if (name == "nvbedge") return RefinementStrategy::NvbEdge;
    throw Error("unknown refinement strategy: " + name);
}

std::string strategyName(RefinementStrategy s) {
    switch (s) {
    case RefinementStrategy::Nvb1: return "nvb1";
    case RefinementStrategy::Nvb3: return "nvb";
    case RefinementStrategy::Nvb5: return "nvb5";
    case RefinementStrategy::Rgb: return "rgb";
    case RefinementStrategy::NvbEdge: return "nvbedge";
    }
    return "?";
}

std::vector<char> markEdges(const Mesh& mesh, std::span<const int> marked,
                            RefinementStrategy strategy) {
    std::vector<char> marks(mesh.numEdges(), 0);
    if (strategy == RefinementStrategy::NvbEdge) {
        for (int e : marked) {
            if (e < 0 || e >= mesh.numEdges()) throw Error("markEdges: edge index out of range");
            marks[e] = 1;
        }
        return marks;
    }
    const auto& e2e = mesh.element2edges();
    for (int t : marked) {
        if (t < 0 || t >= mesh.numElements()) throw Error("markEdges: element index out of range");
        if (strategy == RefinementStrategy::Nvb1) {
            marks[e2e[t][0]] = 1;
        } else {
            marks[e2e[t][0]] = 1;
            marks[e2e[t][1]] = 1;
            marks[e2e[t][2]] = 1;
        }
    }
    return marks;
}

std::vector<char> closure(const Mesh& mesh, std::vector<char> marks) {
    if (marks.size() != static_cast<std::size_t>(mesh.numEdges()))
        throw Error("closure: marks size mismatch");
    const auto& e2e = mesh.element2edges();
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& edges : e2e) {
            if ((marks[edges[1]] || marks[edges[2]]) && !marks[edges[0]]) {
                marks[edges[0]] = 1;
                changed = true;
            }
        }
    }
    return marks;
}

std::vector<Bisection> assignBisections(const Mesh& mesh, std::span<const char> closedMarks,
                                        RefinementStrategy strategy) {
    const auto& e2e = mesh.element2edges();
    std::vector<Bisection> result(mesh.numElements(), Bisection::None);
    for (int t = 0; t < mesh.numElements(); ++t) {
        const int pattern = (closedMarks[e2e[t][0]] ? 1 : 0) | (closedMarks[e2e[t][1]] ? 2 : 0) |
                            (closedMarks[e2e[t][2]] ? 4 : 0);
        switch (pattern) {
        case 0: result[t] = Bisection::None; break;
        case 1: result[t] = Bisection::Bisec1; break;
        case 3: result[t] = Bisection::Bisec12; break;
        case 5: result[t] = Bisection::Bisec13; break;
        case 7:
            result[t] = (strategy == RefinementStrategy::Nvb5)  ? Bisection::Bisec5
                        : (strategy == RefinementStrategy::Rgb) ? Bisection::BisecRed
                                                                : Bisection::Bisec123;
            break;
        default:
            throw Error("assignBisections: marked edge without marked refinement edge in element " +
                        std::to_string(t));
        }
    }
    return result;
}

// Step (iv): build the refined arrays and swap them into the mesh.
struct RefinementExecutor {
    static RefinementRecord run(Mesh& mesh, const std::vector<char>& closedMarks,
                                const std::vector<Bisection>& rules) {
        RefinementRecord rec;
        rec.generationBefore = mesh.generation_;
        rec.oldNumVertices = mesh.numVertices();
        rec.oldNumElements = mesh.numElements();
        rec.oldNumEdges = mesh.numEdges();
        rec.elementRule = rules;
        rec.edgeBisected = closedMarks;
        rec.vertexMap.resize(rec.oldNumVertices);
        for (int v = 0; v < rec.oldNumVertices; ++v) rec.vertexMap[v] = v;

        const bool any = std::any_of(closedMarks.begin(), closedMarks.end(),
                                     [](char c) { return c != 0; });
        rec.edgeMidpoint.assign(rec.oldNumEdges, -1);
        rec.interiorVertex.assign(rec.oldNumElements, -1);
        rec.childrenStart.resize(rec.oldNumElements);
        rec.childrenCount.resize(rec.oldNumElements);
        if (!any) {
            for (int t = 0; t < rec.oldNumElements; ++t) {
                rec.childrenStart[t] = t;
                rec.childrenCount[t] = 1;
            }
            rec.generationAfter = rec.generationBefore;
            return rec;
        }

        std::vector<std::array<double, 2>> coords = mesh.coordinates_;
        // midpoints in edge order, then interior points in element order
        for (int e = 0; e < rec.oldNumEdges; ++e) {
            if (!closedMarks[e]) continue;
            const auto& a = coords[mesh.edges_[e][0]];
            const auto& b = coords[mesh.edges_[e][1]];
            rec.edgeMidpoint[e] = static_cast<int>(coords.size());
            coords.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])});
        }
        for (int t = 0; t < rec.oldNumElements; ++t) {
            if (!BisectionRule::get(rules[t]).hasInteriorVertex) continue;
            const auto& el = mesh.elements_[t];
            const auto& z0 = coords[el[0]];
            const auto& z1 = coords[el[1]];
            const auto& z2 = coords[el[2]];
            rec.interiorVertex[t] = static_cast<int>(coords.size());
            coords.push_back({(z0[0] + z1[0] + z2[0]) / 3.0, (z0[1] + z1[1] + z2[1]) / 3.0});
        }

        std::vector<std::array<int, 3>> newElements;
        for (int t = 0; t < rec.oldNumElements; ++t) {
            const auto& rule = BisectionRule::get(rules[t]);
            rec.childrenStart[t] = static_cast<int>(newElements.size());
            if (rules[t] == Bisection::None) {
                newElements.push_back(mesh.elements_[t]);
                rec.childrenCount[t] = 1;
                continue;
            }
            // local index -> global vertex
            std::array<int, 7> local{};
            local[0] = mesh.elements_[t][0];
            local[1] = mesh.elements_[t][1];
            local[2] = mesh.elements_[t][2];
            local[3] = rec.edgeMidpoint[mesh.element2edges_[t][0]];
            local[4] = rec.edgeMidpoint[mesh.element2edges_[t][1]];
            local[5] = rec.edgeMidpoint[mesh.element2edges_[t][2]];
            local[6] = rec.interiorVertex[t];
            for (const auto& child : rule.children)
                newElements.push_back({local[child[0]], local[child[1]], local[child[2]]});
            rec.childrenCount[t] = static_cast<int>(rule.children.size());
        }

        // boundary parts: bisected edges are replaced by their two halves,
        // keeping the stored orientation
        std::vector<std::vector<std::array<int, 2>>> newBoundaries(mesh.boundaries_.size());
        for (std::size_t p = 0; p < mesh.boundaries_.size(); ++p) {
            for (int e : mesh.boundaries_[p]) {
                const int a = mesh.edges_[e][0], b = mesh.edges_[e][1];
                if (closedMarks[e]) {
                    const int m = rec.edgeMidpoint[e];
                    newBoundaries[p].push_back({a, m});
                    newBoundaries[p].push_back({m, b});
                } else {
                    newBoundaries[p].push_back({a, b});
                }
            }
        }

        mesh.coordinates_ = std::move(coords);
        mesh.elements_ = std::move(newElements);
        mesh.buildConnectivity(newBoundaries, false);
        mesh.generation_ += 1;
        rec.generationAfter = mesh.generation_;
        return rec;
    }
};

RefinementRecord Mesh::refineLocally(std::span<const int> marked, RefinementStrategy strategy) {
    const auto marks = closure(*this, markEdges(*this, marked, strategy));
    const auto rules = assignBisections(*this, marks, strategy);
    return RefinementExecutor::run(*this, marks, rules);
}

std::vector<RefinementRecord> Mesh::refineUniform(int n, RefinementStrategy strategy) {
    if (n < 1) throw Error("refineUniform: n must be >= 1");
    std::vector<RefinementRecord> records;
    records.reserve(n);
    for (int round = 0; round < n; ++round) {
        std::vector<int> all(strategy == RefinementStrategy::NvbEdge ? numEdges() : numElements());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        records.push_back(refineLocally(all, strategy));
    }
    return records;
}

} // namespace afem
