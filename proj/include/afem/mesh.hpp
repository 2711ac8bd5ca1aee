#ifndef AFEM_MESH_HPP
#define AFEM_MESH_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "afem/core.hpp"

namespace afem {

// Per-element and per-edge affine transformation data of a mesh snapshot.
// For an element T = conv{z0, z1, z2}, F_T maps the reference triangle
// conv{(0,0),(1,0),(0,1)} onto T; detDF = 2|T| and dfInvT is the transposed
// inverse of DF_T, stored column-major (m11, m21, m12, m22). Edge normals
// point to the right of the stored edge direction, hence out of the domain on
// boundary edges.
struct AffineData {
    std::vector<double> detDF;                  // per element, = 2 * area
    std::vector<double> area;                   // per element
    std::vector<std::array<double, 4>> dfInvT;  // per element, column-major 2x2
    std::vector<double> edgeLength;             // per edge
    std::vector<std::array<double, 2>> unitNormal; // per edge
    std::uint64_t generation = 0;
};

struct MeshOptions {
    bool validate = true;
};

enum class Bisection; // refinement.hpp
enum class RefinementStrategy; // refinement.hpp
struct RefinementRecord; // refinement.hpp

// Conforming 2D triangulation with full edge connectivity and boundary
// decomposition. Elements are stored counter-clockwise; the j-th edge of an
// element connects its local vertices j and (j+1) mod 3. Edge indices are
// assigned by lexicographic order of the (min, max) vertex pair; interior
// edges are stored oriented from the lower to the higher vertex index,
// boundary edges keep the user-provided orientation (domain on their left).
class Mesh {
public:
    Mesh(std::vector<std::array<double, 2>> coordinates,
         std::vector<std::array<int, 3>> elements,
         std::vector<std::vector<std::array<int, 2>>> boundaryEdgeLists,
         MeshOptions options = {});

    // Comma-separated .dat files (1-based indices): coordinates.dat,
    // elements.dat, boundary<n>.dat for n = 1, 2, ...; nameOrPath is either a
    // directory or the name of a bundled geometry.
    static Mesh loadFromGeometry(const std::string& nameOrPath, MeshOptions options = {});
    void saveGeometry(const std::string& directory) const;

    int numVertices() const { return static_cast<int>(coordinates_.size()); }
    int numElements() const { return static_cast<int>(elements_.size()); }
    int numEdges() const { return static_cast<int>(edges_.size()); }
    int numBoundaryParts() const { return static_cast<int>(boundaries_.size()); }
    std::uint64_t generation() const { return generation_; }

    const std::vector<std::array<double, 2>>& coordinates() const { return coordinates_; }
    const std::vector<std::array<int, 3>>& elements() const { return elements_; }
    const std::vector<std::array<int, 2>>& edges() const { return edges_; }
    const std::vector<std::array<int, 3>>& element2edges() const { return element2edges_; }
    const std::vector<std::vector<int>>& boundaries() const { return boundaries_; }

    bool isBoundaryEdge(int e) const { return edge2elements_[e][1] < 0; }
    // Adjacent elements of an edge: first the element that traverses the edge
    // in its stored direction (domain on the left), then the other or -1.
    const std::array<int, 2>& edge2elements(int e) const { return edge2elements_[e]; }
    // Union of all boundary edge indices, ascending.
    std::vector<int> boundaryEdges() const;

    // Cached per generation; rebuilt lazily after refinement.
    const AffineData& affineData() const;

    // Local mesh refinement; returns the data needed to transfer functions to
    // the refined mesh. An empty effective marking is a no-op and does not
    // advance the generation.
    RefinementRecord refineLocally(std::span<const int> marked, RefinementStrategy strategy);
    std::vector<RefinementRecord> refineUniform(int n, RefinementStrategy strategy);

private:
    friend struct RefinementExecutor;

    void buildConnectivity(const std::vector<std::vector<std::array<int, 2>>>& boundaryEdgeLists,
                           bool validate);
    void validateInput(const std::vector<std::vector<std::array<int, 2>>>& boundaryEdgeLists) const;

    std::vector<std::array<double, 2>> coordinates_;
    std::vector<std::array<int, 3>> elements_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<std::array<int, 3>> element2edges_;
    std::vector<std::vector<int>> boundaries_;
    std::vector<std::array<int, 2>> edge2elements_;
    std::uint64_t generation_ = 0;

    mutable std::shared_ptr<const AffineData> affineCache_;
};

double signedArea(const std::array<double, 2>& a, const std::array<double, 2>& b,
                  const std::array<double, 2>& c);

} // namespace afem

#endif
