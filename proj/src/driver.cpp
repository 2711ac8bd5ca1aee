#include "afem/driver.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

namespace afem {

namespace {

struct Stopwatch {
    std::chrono::steady_clock::time_point last = std::chrono::steady_clock::now();
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last).count();
        last = now;
        return s;
    }
};

bool limitReached(const LoopConfig& config, std::size_t nDofs, std::size_t nElements,
                  int level) {
    if (level >= config.maxLevels) return true;
    if (config.maxDofs > 0 && nDofs >= config.maxDofs) return true;
    if (config.maxElements > 0 && nElements >= config.maxElements) return true;
    return false;
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<double> restrictTo(std::span<const double> full, std::span<const int> idx) {
    std::vector<double> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = full[idx[i]];
    return out;
}

void finishLevel(LevelRecord& rec, ConvergenceHistory& history, double& cumulative) {
    cumulative += rec.tAssembleA + rec.tAssembleF + rec.tSolve + rec.tEstimate + rec.tMark +
                  rec.tRefine;
    rec.tTotal = cumulative;
    history.levels.push_back(rec);
}

// exact singular solution r^(2/3) sin(2 phi / 3) on the L-shape, with the
// angle wrapped to [0, 2 pi)
double lshapeExact(double x, double y) {
    const double r = std::hypot(x, y);
    double phi = std::atan2(y, x);
    if (phi < 0) phi += 2.0 * std::numbers::pi;
    return std::pow(r, 2.0 / 3.0) * std::sin(2.0 / 3.0 * phi);
}

// normal derivative of the exact solution on the outer boundary; the side is
// identified from the coordinates
double lshapeNeumannData(double x, double y) {
    double phi = std::atan2(y, x);
    if (phi < 0) phi += 2.0 * std::numbers::pi;
    const double r2 = x * x + y * y;
    const double cr = (2.0 / 3.0) * std::pow(r2, -2.0 / 3.0);
    const double cphi = (2.0 / 3.0) * phi;
    const double dudx = cr * (x * std::sin(cphi) - y * std::cos(cphi));
    const double dudy = cr * (y * std::sin(cphi) + x * std::cos(cphi));
    const bool horizontal = std::abs(x) > std::abs(y);
    if (horizontal) return x > 0 ? dudx : -dudx;
    return y > 0 ? dudy : -dudy;
}

FunctionPtr hessianTraceSquared(const std::shared_ptr<const FeFunction>& u) {
    return std::make_shared<CompositeFunction>(
        [](std::span<const Batched> args) {
            const Batched& h = args[0];
            Batched out(1, h.entities(), h.nodes());
            for (int k = 0; k < h.nodes(); ++k)
                for (int j = 0; j < h.entities(); ++j) {
                    const double tr = h(0, j, k) + h(3, j, k);
                    out(0, j, k) = tr * tr;
                }
            return out;
        },
        std::vector<FunctionPtr>{std::make_shared<Hessian>(u)}, 1);
}

} // namespace

void ConvergenceHistory::writeCsv(std::ostream& out) const {
    out << "level,nDofs,estimator,H1Error,goalEstimate,tAssembleA,tAssembleF,tSolve,"
           "tEstimate,tMark,tRefine,tTotal\n";
    out.precision(17);
    for (const auto& r : levels) {
        out << r.level << ',' << r.nDofs << ',' << r.estimator << ',';
        if (r.h1Error) out << *r.h1Error;
        out << ',';
        if (r.goalEstimate) out << *r.goalEstimate;
        out << ',' << r.tAssembleA << ',' << r.tAssembleF << ',' << r.tSolve << ','
            << r.tEstimate << ',' << r.tMark << ',' << r.tRefine << ',' << r.tTotal << '\n';
    }
}

void ConvergenceHistory::writeCsv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    writeCsv(out);
}

ConvergenceHistory runPoisson(const LoopConfig& config) {
    auto mesh = std::make_shared<Mesh>(
        Mesh::loadFromGeometry(config.geometry.empty() ? "unitsquare" : config.geometry));
    ConvergenceHistory history;
    double cumulative = 0.0;

    for (int level = 0;; ++level) {
        auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, config.order));
        if (limitReached(config, fes->numDofs(), mesh->numElements(), level)) break;
        auto u = std::make_shared<FeFunction>(fes);
        BilinearForm blf;
        blf.a = std::make_shared<Constant>(mesh, 1.0);
        LinearForm lf;
        lf.f = std::make_shared<Constant>(mesh, 1.0);

        LevelRecord rec;
        rec.level = level;
        rec.nDofs = fes->numDofs();
        rec.nElements = mesh->numElements();

        Stopwatch watch;
        const SparseSystem a = assemble(blf, *fes);
        rec.tAssembleA = watch.lap();
        const std::vector<double> rhs = assemble(lf, *fes);
        rec.tAssembleF = watch.lap();
        u->setFreeData(solve(a.restricted(fes->freeDofs()),
                             restrictTo(rhs, fes->freeDofs()), config.solver));
        rec.tSolve = watch.lap();
        const std::vector<double> eta2 = estimatePoissonP1(u, lf.f);
        rec.estimator = std::sqrt(sum(eta2));
        rec.tEstimate = watch.lap();
        const std::vector<int> marked = markDoerfler(eta2, config.theta);
        rec.tMark = watch.lap();
        mesh->refineLocally(marked, config.strategy);
        rec.tRefine = watch.lap();
        finishLevel(rec, history, cumulative);
        if (marked.empty()) break;
    }
    if (!config.exportMeshDir.empty()) mesh->saveGeometry(config.exportMeshDir);
    return history;
}

ConvergenceHistory runLshape(const LoopConfig& config) {
    auto mesh = std::make_shared<Mesh>(
        Mesh::loadFromGeometry(config.geometry.empty() ? "Lshape" : config.geometry));
    const int p = config.order;
    ConvergenceHistory history;
    double cumulative = 0.0;

    for (int level = 0;; ++level) {
        auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, p),
                                             std::vector<int>{0});
        if (limitReached(config, fes->numDofs(), mesh->numElements(), level)) break;
        auto u = std::make_shared<FeFunction>(fes);

        BilinearForm blf;
        blf.a = std::make_shared<Constant>(mesh, 1.0);
        blf.qra = QuadratureRule::ofOrder(std::max(2 * p - 2, 1), 2);
        LinearForm lf;
        lf.neumann = SpatialFunction::scalar(mesh, lshapeNeumannData);
        lf.neumannParts = {1};
        lf.qrNeumann = QuadratureRule::ofOrder(2 * p, 1);

        LevelRecord rec;
        rec.level = level;
        rec.nDofs = fes->numDofs();
        rec.nElements = mesh->numElements();

        Stopwatch watch;
        const SparseSystem a = assemble(blf, *fes);
        rec.tAssembleA = watch.lap();
        const std::vector<double> rhs = assemble(lf, *fes);
        rec.tAssembleF = watch.lap();
        u->setFreeData(solve(a.restricted(fes->freeDofs()),
                             restrictTo(rhs, fes->freeDofs()), config.solver));
        rec.tSolve = watch.lap();

        ResidualParts parts;
        parts.volumeIntegrand = hessianTraceSquared(u);
        parts.qrVolume = QuadratureRule::ofOrder(std::max(2 * (p - 2), 1), 2);
        parts.jumpField = std::make_shared<Gradient>(u);
        parts.qrEdge = QuadratureRule::ofOrder(p, 1);
        parts.post = {{zeroCombinator(), {}, mesh->boundaries()[0]},
                      {subtractCombinator(), {lf.neumann}, mesh->boundaries()[1]},
                      {squareCombinator(), {}, {}}};
        const std::vector<double> eta2 = estimateResidual(*mesh, parts);
        rec.estimator = std::sqrt(sum(eta2));
        rec.tEstimate = watch.lap();

        // energy error against the nodal interpolant of the exact solution
        const std::vector<double> exact =
            nodalInterpolation(*SpatialFunction::scalar(mesh, lshapeExact), *fes);
        std::vector<double> delta(u->data());
        for (std::size_t i = 0; i < delta.size(); ++i) delta[i] -= exact[i];
        rec.h1Error = std::sqrt(std::max(0.0, a.bilinear(delta, delta)));

        const std::vector<int> marked = markDoerfler(eta2, config.theta);
        rec.tMark = watch.lap();
        mesh->refineLocally(marked, config.strategy);
        rec.tRefine = watch.lap();
        finishLevel(rec, history, cumulative);
        if (marked.empty()) break;
    }
    if (!config.exportMeshDir.empty()) mesh->saveGeometry(config.exportMeshDir);
    return history;
}

namespace {

// jump field (grad v - data). n with data = (sign * w, 0) carried on the
// piecewise constant space
FunctionPtr fluxMinusData(const std::shared_ptr<const FeFunction>& v,
                          const std::shared_ptr<const FeFunction>& w, double sign) {
    return std::make_shared<CompositeFunction>(
        [sign](std::span<const Batched> args) {
            const Batched& g = args[0];
            const Batched& wv = args[1];
            Batched out(2, g.entities(), g.nodes());
            for (int k = 0; k < g.nodes(); ++k)
                for (int j = 0; j < g.entities(); ++j) {
                    out(0, j, k) = g(0, j, k) - sign * wv.bc(0, j, k);
                    out(1, j, k) = g(1, j, k);
                }
            return out;
        },
        std::vector<FunctionPtr>{std::make_shared<Gradient>(v), w}, 2);
}

} // namespace

std::vector<double> goafemIndicators(const std::shared_ptr<const FeFunction>& v,
                                     const std::shared_ptr<const FeFunction>& w, double sign,
                                     int p) {
    const Mesh& mesh = v->mesh();
    ResidualParts parts;
    parts.volumeIntegrand = hessianTraceSquared(v);
    parts.qrVolume = QuadratureRule::ofOrder(std::max(2 * (p - 2), 1), 2);
    parts.jumpField = fluxMinusData(v, w, sign);
    parts.qrEdge = QuadratureRule::ofOrder(p, 1);
    parts.post = {{zeroCombinator(), {}, mesh.boundaryEdges()},
                  {squareCombinator(), {}, {}}};
    return estimateResidual(mesh, parts);
}

ConvergenceHistory runGoafem(const LoopConfig& config) {
    auto mesh = std::make_shared<Mesh>(
        Mesh::loadFromGeometry(config.geometry.empty() ? "unitsquare" : config.geometry));
    // resolve the data discontinuities along x + y = 1/2 and x + y = 3/2
    mesh->refineUniform(1, RefinementStrategy::Rgb);
    const int p = config.order;

    auto ncFes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::L2, 0));
    auto w = std::make_shared<FeFunction>(ncFes);
    auto wg = std::make_shared<FeFunction>(ncFes);
    w->setData(nodalInterpolation(
        *SpatialFunction::scalar(mesh, [](double x, double y) { return x + y < 0.5 ? 1.0 : 0.0; }),
        *ncFes));
    wg->setData(nodalInterpolation(
        *SpatialFunction::scalar(mesh, [](double x, double y) { return x + y > 1.5 ? 1.0 : 0.0; }),
        *ncFes));

    ConvergenceHistory history;
    double cumulative = 0.0;

    for (int level = 0;; ++level) {
        auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, p));
        if (limitReached(config, fes->numDofs(), mesh->numElements(), level)) break;
        auto u = std::make_shared<FeFunction>(fes);
        auto z = std::make_shared<FeFunction>(fes);

        BilinearForm blf;
        blf.a = std::make_shared<Constant>(mesh, 1.0);
        blf.qra = QuadratureRule::ofOrder(std::max(2 * p - 2, 1), 2);
        LinearForm lfF;
        lfF.fvec = std::make_shared<CompositeFunction>(
            [](std::span<const Batched> args) {
                const Batched& wv = args[0];
                Batched out(2, wv.entities(), wv.nodes());
                for (int k = 0; k < wv.nodes(); ++k)
                    for (int j = 0; j < wv.entities(); ++j) out(0, j, k) = wv(0, j, k);
                return out;
            },
            std::vector<FunctionPtr>{w}, 2);
        LinearForm lfG;
        lfG.fvec = std::make_shared<CompositeFunction>(
            [](std::span<const Batched> args) {
                const Batched& wv = args[0];
                Batched out(2, wv.entities(), wv.nodes());
                for (int k = 0; k < wv.nodes(); ++k)
                    for (int j = 0; j < wv.entities(); ++j) out(0, j, k) = -wv(0, j, k);
                return out;
            },
            std::vector<FunctionPtr>{wg}, 2);

        LevelRecord rec;
        rec.level = level;
        rec.nDofs = fes->numDofs();
        rec.nElements = mesh->numElements();

        Stopwatch watch;
        const SparseSystem a = assemble(blf, *fes);
        rec.tAssembleA = watch.lap();
        const std::vector<double> rhsF = assemble(lfF, *fes);
        const std::vector<double> rhsG = assemble(lfG, *fes);
        rec.tAssembleF = watch.lap();
        // one factorization for the primal and dual right-hand sides
        const auto solutions =
            solve(a.restricted(fes->freeDofs()),
                  {restrictTo(rhsF, fes->freeDofs()), restrictTo(rhsG, fes->freeDofs())},
                  config.solver);
        u->setFreeData(solutions[0]);
        z->setFreeData(solutions[1]);
        rec.tSolve = watch.lap();

        const std::vector<double> eta2 = goafemIndicators(u, w, 1.0, p);
        const std::vector<double> zeta2 = goafemIndicators(z, wg, -1.0, p);
        const double etaSum = sum(eta2), zetaSum = sum(zeta2);
        rec.estimator = std::sqrt(etaSum);
        rec.goalEstimate = std::sqrt(etaSum) * std::sqrt(zetaSum);
        rec.tEstimate = watch.lap();

        // combined marking on eta^2(T) * sum(zeta^2) + zeta^2(T) * sum(eta^2)
        std::vector<double> combined(eta2.size());
        for (std::size_t t = 0; t < eta2.size(); ++t)
            combined[t] = eta2[t] * zetaSum + zeta2[t] * etaSum;
        const std::vector<int> marked = markDoerfler(combined, config.theta);
        rec.tMark = watch.lap();
        const RefinementRecord refRec = mesh->refineLocally(marked, config.strategy);
        auto fineNcFes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::L2, 0));
        const Prolongation P = Prolongation::lowestOrder(*ncFes, *fineNcFes, refRec);
        auto wNew = std::make_shared<FeFunction>(fineNcFes);
        wNew->setData(P.apply(w->data()));
        auto wgNew = std::make_shared<FeFunction>(fineNcFes);
        wgNew->setData(P.apply(wg->data()));
        ncFes = fineNcFes;
        w = wNew;
        wg = wgNew;
        rec.tRefine = watch.lap();
        finishLevel(rec, history, cumulative);
        if (marked.empty()) break;
    }
    if (!config.exportMeshDir.empty()) mesh->saveGeometry(config.exportMeshDir);
    return history;
}

// ------------------------------------------------------------------ AILFEM

Linearization linearizationFromName(const std::string& name) {
    if (name == "zarantonello") return Linearization::Zarantonello;
    if (name == "kacanov") return Linearization::Kacanov;
    if (name == "newton") return Linearization::Newton;
    throw Error("unknown linearization: " + name);
}

std::string linearizationName(Linearization method) {
    switch (method) {
    case Linearization::Zarantonello: return "zarantonello";
    case Linearization::Kacanov: return "kacanov";
    case Linearization::Newton: return "newton";
    }
    return "?";
}

namespace {

double mu(double t) { return 1.0 + std::exp(-t); }
double muPrime(double t) { return -std::exp(-t); }

// -mu(|p|^2) p, the flux of the previous iterate moved to the right-hand side
FunctionPtr minusNonlinearFlux(const std::shared_ptr<const FeFunction>& u) {
    return std::make_shared<CompositeFunction>(
        [](std::span<const Batched> args) {
            const Batched& p = args[0];
            const Batched t2 = vectorProduct(p, p);
            return Batched::zip(p, t2, [](double pc, double t) { return -mu(t) * pc; });
        },
        std::vector<FunctionPtr>{std::make_shared<Gradient>(u)}, 2);
}

FunctionPtr nonlinearFlux(const std::shared_ptr<const FeFunction>& u) {
    return std::make_shared<CompositeFunction>(
        [](std::span<const Batched> args) {
            const Batched& p = args[0];
            const Batched t2 = vectorProduct(p, p);
            return Batched::zip(p, t2, [](double pc, double t) { return mu(t) * pc; });
        },
        std::vector<FunctionPtr>{std::make_shared<Gradient>(u)}, 2);
}

FunctionPtr frozenDiffusion(const std::shared_ptr<const FeFunction>& u) {
    return std::make_shared<CompositeFunction>(
        [](std::span<const Batched> args) {
            return vectorProduct(args[0], args[0]).map(mu);
        },
        std::vector<FunctionPtr>{std::make_shared<Gradient>(u)}, 1);
}

// mu(|p|^2) I + 2 mu'(|p|^2) (p x p), column-major
FunctionPtr newtonDiffusion(const std::shared_ptr<const FeFunction>& u) {
    return std::make_shared<CompositeFunction>(
        [](std::span<const Batched> args) {
            const Batched& p = args[0];
            const Batched t2 = vectorProduct(p, p);
            const Batched outer = vectorProduct(p, p, {2, 1, false}, {2, 1, true});
            Batched out(4, p.entities(), p.nodes());
            for (int k = 0; k < p.nodes(); ++k)
                for (int j = 0; j < p.entities(); ++j) {
                    const double t = t2(0, j, k);
                    const double m = mu(t), dm = 2.0 * muPrime(t);
                    out(0, j, k) = m + dm * outer(0, j, k);
                    out(1, j, k) = dm * outer(1, j, k);
                    out(2, j, k) = dm * outer(2, j, k);
                    out(3, j, k) = m + dm * outer(3, j, k);
                }
            return out;
        },
        std::vector<FunctionPtr>{std::make_shared<Gradient>(u)}, 4, 2, 2);
}

} // namespace

std::vector<double> ailfemIndicators(const std::shared_ptr<const FeFunction>& u) {
    const Mesh& mesh = u->mesh();
    ResidualParts parts;
    parts.volumeIntegrand = std::make_shared<Constant>(u->space().meshPtr(), 1.0);
    parts.qrVolume = QuadratureRule::ofOrder(1, 2);
    parts.jumpField = nonlinearFlux(u);
    parts.qrEdge = QuadratureRule::ofOrder(1, 1);
    parts.post = {{zeroCombinator(), {}, mesh.boundaryEdges()},
                  {squareCombinator(), {}, {}}};
    return estimateResidual(mesh, parts);
}

namespace {

struct AilfemTimings {
    double assembleA = 0, assembleF = 0, solve = 0, estimate = 0;
};

// one linearization step; updates u in place and returns the energy norm of
// the computed update measured in the step's own bilinear form
double ailfemStepImpl(const std::shared_ptr<FeFunction>& u, Linearization method, double delta,
                      SolverKind solver, AilfemTimings* timings) {
    const auto fes = u->spacePtr();
    const auto meshPtr = fes->meshPtr();
    BilinearForm blf;
    LinearForm lf;
    lf.f = std::make_shared<Constant>(meshPtr, 1.0);
    switch (method) {
    case Linearization::Zarantonello:
        blf.a = std::make_shared<Constant>(meshPtr, 1.0);
        lf.fvec = minusNonlinearFlux(u);
        break;
    case Linearization::Kacanov:
        blf.a = frozenDiffusion(u);
        break;
    case Linearization::Newton:
        blf.a = newtonDiffusion(u);
        lf.fvec = minusNonlinearFlux(u);
        break;
    }

    Stopwatch watch;
    const SparseSystem a = assemble(blf, *fes);
    const SparseSystem af = a.restricted(fes->freeDofs());
    if (timings) timings->assembleA += watch.lap();
    const std::vector<double> rhs = assemble(lf, *fes);
    std::vector<double> rhsFree = restrictTo(rhs, fes->freeDofs());
    if (timings) timings->assembleF += watch.lap();
    const std::vector<double> sol = solve(af, rhsFree, solver);
    if (timings) timings->solve += watch.lap();

    const std::vector<double> uFree = restrictTo(u->data(), fes->freeDofs());
    std::vector<double> update(sol.size()), newFree(sol.size());
    switch (method) {
    case Linearization::Zarantonello:
        for (std::size_t i = 0; i < sol.size(); ++i) {
            update[i] = sol[i];
            newFree[i] = uFree[i] + delta * sol[i];
        }
        break;
    case Linearization::Kacanov:
        for (std::size_t i = 0; i < sol.size(); ++i) {
            update[i] = sol[i] - uFree[i];
            newFree[i] = sol[i];
        }
        break;
    case Linearization::Newton:
        for (std::size_t i = 0; i < sol.size(); ++i) {
            update[i] = sol[i];
            newFree[i] = uFree[i] + sol[i];
        }
        break;
    }
    u->setFreeData(newFree);
    return std::sqrt(std::max(0.0, af.bilinear(update, update)));
}

} // namespace

double ailfemStep(FeFunction& u, Linearization method, double delta, SolverKind solver) {
    // non-owning alias; the shared_ptr must not delete the caller's object
    std::shared_ptr<FeFunction> alias(&u, [](FeFunction*) {});
    return ailfemStepImpl(alias, method, delta, solver, nullptr);
}

ConvergenceHistory runAilfem(const AilfemConfig& config) {
    if (!(config.delta > 0.0)) throw Error("runAilfem: damping parameter must be positive");
    const LoopConfig& loop = config.loop;
    auto mesh = std::make_shared<Mesh>(
        Mesh::loadFromGeometry(loop.geometry.empty() ? "Lshape" : loop.geometry));
    auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
    auto u = std::make_shared<FeFunction>(fes);

    ConvergenceHistory history;
    double cumulative = 0.0;

    for (int level = 0;; ++level) {
        if (limitReached(loop, fes->numDofs(), mesh->numElements(), level)) break;

        LevelRecord rec;
        rec.level = level;
        rec.nDofs = fes->numDofs();
        rec.nElements = mesh->numElements();

        // iterate the linearization until the update is small against the
        // estimator of the current iterate
        AilfemTimings timings;
        std::vector<double> eta2;
        Stopwatch watch;
        bool converged = false;
        for (int step = 0; step < config.maxInnerSteps && !converged; ++step) {
            const double updateNorm =
                ailfemStepImpl(u, config.method, config.delta, loop.solver, &timings);
            watch.lap();
            eta2 = ailfemIndicators(u);
            rec.estimator = std::sqrt(sum(eta2));
            timings.estimate += watch.lap();
            converged = updateNorm <= config.innerTolFactor * rec.estimator;
        }
        if (!converged)
            throw Error("runAilfem: inner iteration did not converge within " +
                        std::to_string(config.maxInnerSteps) + " steps on level " +
                        std::to_string(level));
        rec.tAssembleA = timings.assembleA;
        rec.tAssembleF = timings.assembleF;
        rec.tSolve = timings.solve;
        rec.tEstimate = timings.estimate;

        watch.lap();
        const std::vector<int> marked = markDoerfler(eta2, loop.theta);
        rec.tMark = watch.lap();
        const RefinementRecord refRec = mesh->refineLocally(marked, loop.strategy);
        // nested iteration: carry the final iterate to the refined mesh
        auto fineFes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
        const Prolongation P = Prolongation::lowestOrder(*fes, *fineFes, refRec);
        auto uNew = std::make_shared<FeFunction>(fineFes);
        uNew->setData(P.apply(u->data()));
        fes = fineFes;
        u = uNew;
        rec.tRefine = watch.lap();
        finishLevel(rec, history, cumulative);
        if (marked.empty()) break;
    }
    if (!loop.exportMeshDir.empty()) mesh->saveGeometry(loop.exportMeshDir);
    return history;
}

} // namespace afem
