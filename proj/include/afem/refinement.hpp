#ifndef AFEM_REFINEMENT_HPP
#define AFEM_REFINEMENT_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "afem/mesh.hpp"

namespace afem {

// Ways of splitting a single triangle. The refinement edge of an element is
// always its first edge (between its first two listed vertices); children are
// listed with their own refinement edge first, so the convention is preserved
// across generations.
enum class Bisection {
    None,
    Bisec1,   // bisect the refinement edge
    Bisec12,  // refinement edge + second edge
    Bisec13,  // refinement edge + third edge
    Bisec123, // all three edges, 4 children
    Bisec5,   // all three edges + interior vertex, 6 children
    BisecRed, // all three edges, 4 similar children
};

// Child layout of a bisection in local indices:
//   0,1,2 = parent vertices (counter-clockwise),
//   3,4,5 = midpoints of edges (0,1), (1,2), (2,0),
//   6     = interior point (centroid), Bisec5 only.
struct BisectionRule {
    std::vector<std::array<int, 3>> children; // CCW, refinement edge = first two
    std::array<bool, 3> bisectsEdge;
    bool hasInteriorVertex;
    static const BisectionRule& get(Bisection b);
};

// How element markings translate into edge markings and which bisection an
// edge-marking pattern selects.
enum class RefinementStrategy {
    Nvb1,    // mark only the refinement edge of marked elements
    Nvb3,    // mark all three edges (the standard NVB)
    Nvb5,    // like Nvb3, but fully marked elements split into 6 children
    Rgb,     // like Nvb3, but fully marked elements are red-refined
    NvbEdge, // marked indices are edges, not elements (experimental)
};

RefinementStrategy strategyFromName(const std::string& name);
std::string strategyName(RefinementStrategy s);

// Data recorded during one refinement call; consumed by prolongation.
// Surviving vertices keep their indices (vertexMap is the identity); edge
// midpoints are appended in edge order, then interior points in element
// order. Children of old element t occupy the contiguous new-index range
// [childrenStart[t], childrenStart[t] + childrenCount[t]).
struct RefinementRecord {
    std::uint64_t generationBefore = 0;
    std::uint64_t generationAfter = 0;
    int oldNumVertices = 0;
    int oldNumElements = 0;
    int oldNumEdges = 0;
    std::vector<char> edgeBisected;    // per old edge
    std::vector<int> edgeMidpoint;     // per old edge: new vertex index or -1
    std::vector<int> interiorVertex;   // per old element: new vertex index or -1
    std::vector<Bisection> elementRule; // per old element
    std::vector<int> childrenStart;    // per old element
    std::vector<int> childrenCount;    // per old element
    std::vector<int> vertexMap;        // old vertex -> new vertex index

    bool isNoOp() const { return generationBefore == generationAfter; }
};

// Step (i): edges that must be bisected to refine the marked elements.
// For NvbEdge the marked indices denote edges directly.
std::vector<char> markEdges(const Mesh& mesh, std::span<const int> marked,
                            RefinementStrategy strategy);

// Step (ii): smallest closure-stable superset of the marks; an element with
// any marked edge also has its refinement edge marked.
std::vector<char> closure(const Mesh& mesh, std::vector<char> marks);

// Step (iii): bisection per element from its closed marked-edge pattern.
std::vector<Bisection> assignBisections(const Mesh& mesh, std::span<const char> closedMarks,
                                        RefinementStrategy strategy);

} // namespace afem

#endif
