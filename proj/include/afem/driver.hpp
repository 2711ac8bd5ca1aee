#ifndef AFEM_DRIVER_HPP
#define AFEM_DRIVER_HPP

#include <optional>
#include <ostream>
#include <string>

#include "afem/assembly.hpp"
#include "afem/estimators.hpp"
#include "afem/prolongation.hpp"

namespace afem {

struct LoopConfig {
    double theta = 0.5;
    int order = 1;
    std::size_t maxDofs = 0;     // stop once reached; 0 = no bound
    std::size_t maxElements = 0; // stop once reached; 0 = no bound
    int maxLevels = 200;
    RefinementStrategy strategy = RefinementStrategy::Nvb3;
    SolverKind solver = SolverKind::Auto;
    std::string geometry;      // empty = experiment default
    std::string exportMeshDir; // write the final mesh in .dat format if set
};

struct LevelRecord {
    int level = 0;
    std::size_t nDofs = 0;
    std::size_t nElements = 0;
    double estimator = 0.0;
    std::optional<double> h1Error;
    std::optional<double> goalEstimate;
    double tAssembleA = 0.0, tAssembleF = 0.0, tSolve = 0.0;
    double tEstimate = 0.0, tMark = 0.0, tRefine = 0.0;
    double tTotal = 0.0; // cumulative wall time including this level
};

struct ConvergenceHistory {
    std::vector<LevelRecord> levels;
    void writeCsv(std::ostream& out) const;
    void writeCsv(const std::string& path) const;
};

// Lowest-order model problem on the unit square: -Laplace u = 1, u = 0 on
// the whole boundary.
ConvergenceHistory runPoisson(const LoopConfig& config);

// Higher-order run with the known singular harmonic solution on the L-shape;
// Dirichlet on the re-entrant corner edges, Neumann data elsewhere. Records
// the energy error against the nodal interpolant of the exact solution.
ConvergenceHistory runLshape(const LoopConfig& config);

// Goal-oriented run with discontinuous volume data on the unit square; marks
// by the combined primal/dual indicators and records the estimator product.
ConvergenceHistory runGoafem(const LoopConfig& config);

enum class Linearization { Zarantonello, Kacanov, Newton };
Linearization linearizationFromName(const std::string& name);
std::string linearizationName(Linearization method);

struct AilfemConfig {
    LoopConfig loop;
    Linearization method = Linearization::Zarantonello;
    double delta = 0.5;          // Zarantonello damping
    double innerTolFactor = 0.1; // stop inner iteration at ||update|| <= factor * eta
    int maxInnerSteps = 50;
};

// Adaptive iterative linearization of the quasilinear problem
// -div(mu(|grad u|^2) grad u) = 1 on the L-shape with mu(t) = 1 + exp(-t),
// homogeneous Dirichlet boundary, lowest order, nested iteration across
// levels.
ConvergenceHistory runAilfem(const AilfemConfig& config);

// One linearization step on the current iterate; returns the energy norm of
// the computed update. Exposed for tests.
double ailfemStep(FeFunction& u, Linearization method, double delta, SolverKind solver);

// Residual indicators of the goal-oriented run for a solution component v
// with data field (sign * w, 0) on the piecewise constant space.
std::vector<double> goafemIndicators(const std::shared_ptr<const FeFunction>& v,
                                     const std::shared_ptr<const FeFunction>& w, double sign,
                                     int order);

// Residual indicators of the quasilinear problem at the current iterate.
std::vector<double> ailfemIndicators(const std::shared_ptr<const FeFunction>& u);

} // namespace afem

#endif
