#ifndef AFEM_ESTIMATORS_HPP
#define AFEM_ESTIMATORS_HPP

#include "afem/fe_function.hpp"
#include "afem/integration.hpp"

namespace afem {

// Residual error estimator of the form
//   eta(T)^2 = hT^2 * vol(T) + hT * sum_{E in T} edge(E),   hT = sqrt(|T|),
// with vol the elementwise integral of a squared residual density and edge
// the integrated, post-processed normal jump of a flux field. Each edge
// contribution enters both adjacent elements.
struct ResidualParts {
    FunctionPtr volumeIntegrand; // scalar; unset contributes nothing
    QuadratureRule qrVolume = QuadratureRule::ofOrder(1, 2);
    FunctionPtr jumpField; // two components; unset contributes nothing
    QuadratureRule qrEdge = QuadratureRule::ofOrder(1, 1);
    std::vector<JumpPostProcess> post; // e.g. zero boundary parts, then square
};

std::vector<double> estimateResidual(const Mesh& mesh, const ResidualParts& parts);

// Estimator of the lowest-order model problem: volume term |T| ||f||^2 and
// squared normal jumps of the gradient, with boundary edges zeroed.
std::vector<double> estimatePoissonP1(std::shared_ptr<const FeFunction> u, FunctionPtr load);

// ready-made post-processing combinators
Combinator squareCombinator();
Combinator zeroCombinator();
Combinator subtractCombinator(); // (jump, g) -> jump - g

// Smallest sorted prefix M with theta * sum(eta2) <= sum(eta2 over M); ties
// break by ascending element index. All-zero indicators give an empty set.
std::vector<int> markDoerfler(std::span<const double> eta2, double theta);

} // namespace afem

#endif
