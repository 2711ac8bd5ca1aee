#ifndef AFEM_FE_SPACE_HPP
#define AFEM_FE_SPACE_HPP

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "afem/finite_element.hpp"
#include "afem/mesh.hpp"

namespace afem {

// Global degree-of-freedom management for a finite element on a mesh
// snapshot. H1 numbering: vertex dofs first, then the (p-1) interior dofs of
// each edge walked along the stored edge orientation, then element interiors.
// The space is immutable; after a refinement it has to be rebuilt, and
// anything evaluated against a stale space fails loudly.
class FeSpace {
public:
    // dirichletParts: boundary part indices; defaults to the whole boundary
    FeSpace(std::shared_ptr<const Mesh> mesh, FiniteElement element,
            std::optional<std::vector<int>> dirichletParts = std::nullopt);

    const Mesh& mesh() const { return *mesh_; }
    std::shared_ptr<const Mesh> meshPtr() const { return mesh_; }
    const FiniteElement& element() const { return element_; }
    std::uint64_t meshGeneration() const { return generation_; }
    bool isCurrent() const { return mesh_->generation() == generation_; }
    void requireCurrent() const {
        if (!isCurrent())
            throw StaleDataError("FeSpace: mesh was refined after this space was built");
    }

    int numDofs() const { return numDofs_; }
    const std::vector<int>& dirichletParts() const { return dirichletParts_; }

    std::span<const int> elementDofs(int element) const {
        const int n = element_.localDofCount();
        return {element2dofs_.data() + static_cast<std::size_t>(element) * n,
                static_cast<std::size_t>(n)};
    }
    // [start vertex dof, end vertex dof, interior dofs along the edge]
    std::span<const int> edgeDofs(int edge) const;

    const std::vector<char>& freeMask() const { return freeMask_; }
    const std::vector<int>& freeDofs() const { return freeDofs_; }

private:
    std::shared_ptr<const Mesh> mesh_;
    FiniteElement element_;
    std::uint64_t generation_;
    std::vector<int> dirichletParts_;
    int numDofs_ = 0;
    std::vector<int> element2dofs_;
    std::vector<int> edge2dofs_;
    std::vector<char> freeMask_;
    std::vector<int> freeDofs_;
};

} // namespace afem

#endif
