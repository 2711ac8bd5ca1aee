#ifndef AFEM_INTEGRATION_HPP
#define AFEM_INTEGRATION_HPP

#include "afem/function.hpp"

namespace afem {

// Quadrature over elements: per element T, |T| * sum_k w_k f(x(l_k, T)),
// componentwise. Result batch is (component, element, 1).
Batched integrateElement(const Function& f, const QuadratureRule& qr,
                         std::span<const int> elements);
Batched integrateElement(const Function& f, const QuadratureRule& qr);

// Quadrature over edges for functions with an edge trace.
Batched integrateEdge(const Function& f, const QuadratureRule& qr, std::span<const int> edges);
Batched integrateEdge(const Function& f, const QuadratureRule& qr);

// Nodewise post-processing step for jump integration: the running jump values
// on the given edges are replaced by fn(jump, args...), where the extra
// arguments are evaluated through their edge trace. An empty edge list means
// all integrated edges. Steps apply sequentially on the running values.
struct JumpPostProcess {
    Combinator fn;
    std::vector<FunctionPtr> args;
    std::vector<int> edges;
};

// Integrate the jump of f across edges: f is evaluated from both adjacent
// elements (single-sided on the boundary), the difference is taken nodewise
// with the orientation-inducing element first, post-processing steps run in
// order, and the result is integrated edgewise. integrateNormalJump
// additionally contracts the two-component jump with the edge normal before
// post-processing.
Batched integrateJump(const Function& f, const QuadratureRule& qr,
                      const std::vector<JumpPostProcess>& post = {},
                      std::span<const int> edges = {});
Batched integrateNormalJump(const Function& f, const QuadratureRule& qr,
                            const std::vector<JumpPostProcess>& post = {},
                            std::span<const int> edges = {});

} // namespace afem

#endif
