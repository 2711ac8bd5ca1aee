#include "afem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace afem {

double signedArea(const std::array<double, 2>& a, const std::array<double, 2>& b,
                  const std::array<double, 2>& c) {
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
}

Mesh::Mesh(std::vector<std::array<double, 2>> coordinates,
           std::vector<std::array<int, 3>> elements,
           std::vector<std::vector<std::array<int, 2>>> boundaryEdgeLists,
           MeshOptions options)
    : coordinates_(std::move(coordinates)), elements_(std::move(elements)) {
    if (options.validate) validateInput(boundaryEdgeLists);
    buildConnectivity(boundaryEdgeLists, options.validate);
}

void Mesh::validateInput(const std::vector<std::vector<std::array<int, 2>>>& boundaryEdgeLists) const {
    const int nV = numVertices();
    if (nV < 3 || elements_.empty()) throw Error("Mesh: needs at least one element");

    double xmin = coordinates_[0][0], xmax = xmin, ymin = coordinates_[0][1], ymax = ymin;
    for (const auto& c : coordinates_) {
        xmin = std::min(xmin, c[0]);
        xmax = std::max(xmax, c[0]);
        ymin = std::min(ymin, c[1]);
        ymax = std::max(ymax, c[1]);
    }
    const double diag2 = (xmax - xmin) * (xmax - xmin) + (ymax - ymin) * (ymax - ymin);

    for (std::size_t t = 0; t < elements_.size(); ++t) {
        const auto& e = elements_[t];
        for (int v : e)
            if (v < 0 || v >= nV)
                throw Error("Mesh: vertex index out of range in element " + std::to_string(t));
        if (e[0] == e[1] || e[1] == e[2] || e[0] == e[2])
            throw Error("Mesh: repeated vertex in element " + std::to_string(t));
        const double area = signedArea(coordinates_[e[0]], coordinates_[e[1]], coordinates_[e[2]]);
        if (area <= 1e-14 * diag2)
            throw Error("Mesh: clockwise or degenerate element " + std::to_string(t));
    }
    for (std::size_t p = 0; p < boundaryEdgeLists.size(); ++p)
        for (const auto& be : boundaryEdgeLists[p])
            for (int v : be)
                if (v < 0 || v >= nV)
                    throw Error("Mesh: vertex index out of range in boundary part " + std::to_string(p + 1));
}

void Mesh::buildConnectivity(const std::vector<std::vector<std::array<int, 2>>>& boundaryEdgeLists,
                             bool validate) {
    const int nT = numElements();

    // Unique undirected edges, numbered by lexicographic (min, max) order.
    std::map<std::array<int, 2>, int> edgeIndex;
    for (const auto& el : elements_)
        for (int j = 0; j < 3; ++j) {
            const int a = el[j], b = el[(j + 1) % 3];
            edgeIndex.try_emplace({std::min(a, b), std::max(a, b)}, 0);
        }
    int idx = 0;
    for (auto& [key, value] : edgeIndex) value = idx++;
    const int nE = idx;

    edges_.resize(nE);
    for (const auto& [key, value] : edgeIndex) edges_[value] = key; // low -> high for now

    element2edges_.assign(nT, {});
    edge2elements_.assign(nE, {-1, -1});
    // directedSeen[e]: which traversal directions occur among elements
    std::vector<std::array<int, 2>> traversedBy(nE, {-1, -1}); // [0]: low->high, [1]: high->low
    for (int t = 0; t < nT; ++t)
        for (int j = 0; j < 3; ++j) {
            const int a = elements_[t][j], b = elements_[t][(j + 1) % 3];
            const int e = edgeIndex.at({std::min(a, b), std::max(a, b)});
            element2edges_[t][j] = e;
            const int dir = (a < b) ? 0 : 1;
            if (traversedBy[e][dir] >= 0)
                throw Error("Mesh: edge traversed twice in the same direction (non-manifold or wrong orientation)");
            traversedBy[e][dir] = t;
        }

    // Boundary parts: map user vertex pairs to edge indices; the given
    // orientation (domain on the left) is kept as the stored edge direction.
    boundaries_.assign(boundaryEdgeLists.size(), {});
    std::vector<char> onBoundary(nE, 0);
    for (std::size_t p = 0; p < boundaryEdgeLists.size(); ++p) {
        boundaries_[p].reserve(boundaryEdgeLists[p].size());
        for (const auto& be : boundaryEdgeLists[p]) {
            const int a = be[0], b = be[1];
            auto it = edgeIndex.find({std::min(a, b), std::max(a, b)});
            if (it == edgeIndex.end())
                throw Error("Mesh: boundary edge not found among element edges");
            const int e = it->second;
            const int dir = (a < b) ? 0 : 1;
            if (traversedBy[e][dir] < 0)
                throw Error("Mesh: boundary edge orientation does not match any element (domain must lie on its left)");
            if (traversedBy[e][1 - dir] >= 0)
                throw Error("Mesh: boundary edge has elements on both sides");
            if (onBoundary[e]) throw Error("Mesh: duplicate boundary edge");
            onBoundary[e] = 1;
            edges_[e] = {a, b};
            boundaries_[p].push_back(e);
        }
    }

    // Edges adjacent to a single element always get the orientation induced
    // by that element, so the domain is on their left even when the edge is
    // not listed in any boundary part.
    for (int e = 0; e < nE; ++e)
        if (!onBoundary[e] && (traversedBy[e][0] < 0 || traversedBy[e][1] < 0)) {
            const int dir = traversedBy[e][0] >= 0 ? 0 : 1;
            if (dir == 1) std::swap(edges_[e][0], edges_[e][1]);
        }

    // Adjacency with the orientation-inducing element first.
    for (int e = 0; e < nE; ++e) {
        const int a = edges_[e][0], b = edges_[e][1];
        const int dirPlus = (a < b) ? 0 : 1;
        edge2elements_[e] = {traversedBy[e][dirPlus], traversedBy[e][1 - dirPlus]};
    }

    if (validate) {
        for (int e = 0; e < nE; ++e)
            if (edge2elements_[e][1] < 0 && !onBoundary[e])
                throw Error("Mesh: edge " + std::to_string(e) +
                            " has a single adjacent element but belongs to no boundary part");
    }
}

std::vector<int> Mesh::boundaryEdges() const {
    std::vector<int> result;
    for (const auto& part : boundaries_) result.insert(result.end(), part.begin(), part.end());
    std::sort(result.begin(), result.end());
    return result;
}

const AffineData& Mesh::affineData() const {
    if (affineCache_ && affineCache_->generation == generation_) return *affineCache_;
    auto data = std::make_shared<AffineData>();
    data->generation = generation_;
    const int nT = numElements(), nE = numEdges();
    data->detDF.resize(nT);
    data->area.resize(nT);
    data->dfInvT.resize(nT);
    for (int t = 0; t < nT; ++t) {
        const auto& z0 = coordinates_[elements_[t][0]];
        const auto& z1 = coordinates_[elements_[t][1]];
        const auto& z2 = coordinates_[elements_[t][2]];
        const double a11 = z1[0] - z0[0], a21 = z1[1] - z0[1];
        const double a12 = z2[0] - z0[0], a22 = z2[1] - z0[1];
        const double det = a11 * a22 - a12 * a21;
        if (det <= 0.0) throw Error("Mesh: degenerate element " + std::to_string(t));
        data->detDF[t] = det;
        data->area[t] = 0.5 * det;
        // inverse transposed of [[a11, a12], [a21, a22]], column-major
        data->dfInvT[t] = {a22 / det, -a12 / det, -a21 / det, a11 / det};
    }
    data->edgeLength.resize(nE);
    data->unitNormal.resize(nE);
    for (int e = 0; e < nE; ++e) {
        const auto& a = coordinates_[edges_[e][0]];
        const auto& b = coordinates_[edges_[e][1]];
        const double dx = b[0] - a[0], dy = b[1] - a[1];
        const double len = std::hypot(dx, dy);
        data->edgeLength[e] = len;
        data->unitNormal[e] = {dy / len, -dx / len};
    }
    affineCache_ = std::move(data);
    return *affineCache_;
}

} // namespace afem
