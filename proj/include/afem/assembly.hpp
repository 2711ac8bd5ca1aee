#ifndef AFEM_ASSEMBLY_HPP
#define AFEM_ASSEMBLY_HPP

#include <optional>

#include "afem/fe_function.hpp"
#include "afem/sparse.hpp"

namespace afem {

// Bilinear form with optional coefficient slots
//   a(u,v) = int_Omega  A grad u . grad v  +  b . grad u v  +  c u v  dx
//          + int_GammaR  alpha u v  ds.
// The diffusion slot accepts a scalar (multiple of the identity) or a
// column-major 2x2 matrix field. Every term integrates with its own
// quadrature rule; unset rules default to exactness max(2p-2,1) for a, 2p
// for b and c, and 2p on edges. Coefficients are shared references, so
// updating an FeFunction used as a coefficient changes the next assembly.
struct BilinearForm {
    FunctionPtr a, b, c, robin;
    std::optional<QuadratureRule> qra, qrb, qrc, qrRobin;
    std::vector<int> robinParts; // boundary part indices; must be set with robin
};

// Linear form with optional slots
//   F(v) = int_Omega  f v + fvec . grad v  dx
//        + int_GammaN  phi v  ds  +  int_GammaR  gamma v  ds.
struct LinearForm {
    FunctionPtr f, fvec, neumann, robin;
    std::optional<QuadratureRule> qrf, qrfvec, qrNeumann, qrRobin;
    std::vector<int> neumannParts;
    std::vector<int> robinParts;
};

SparseSystem assemble(const BilinearForm& form, const FeSpace& space);
std::vector<double> assemble(const LinearForm& form, const FeSpace& space);

} // namespace afem

#endif
