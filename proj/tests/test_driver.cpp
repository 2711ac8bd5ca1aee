#include <cmath>
#include <sstream>

#include "afem/driver.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace afem;

namespace {

std::shared_ptr<Mesh> crissCrossPtr() { return std::make_shared<Mesh>(crissCrossSquare()); }

} // namespace

TEST_CASE("model problem run on the unit square") {
    LoopConfig config;
    config.maxElements = 1500;
    const ConvergenceHistory history = runPoisson(config);
    REQUIRE(history.levels.size() >= 4);
    for (std::size_t i = 1; i < history.levels.size(); ++i)
        CHECK(history.levels[i].nDofs > history.levels[i - 1].nDofs);
    CHECK(history.levels.back().estimator < history.levels.front().estimator);
    CHECK(history.levels.back().nElements < 1500);
    for (const auto& r : history.levels) {
        CHECK_FALSE(r.h1Error.has_value());
        CHECK_FALSE(r.goalEstimate.has_value());
    }
    SUBCASE("csv output carries all columns") {
        std::ostringstream out;
        history.writeCsv(out);
        std::istringstream in(out.str());
        std::string header;
        std::getline(in, header);
        CHECK(header ==
              "level,nDofs,estimator,H1Error,goalEstimate,tAssembleA,tAssembleF,tSolve,"
              "tEstimate,tMark,tRefine,tTotal");
        std::string line;
        int rows = 0;
        while (std::getline(in, line)) {
            CHECK(std::count(line.begin(), line.end(), ',') == 11);
            ++rows;
        }
        CHECK(rows == static_cast<int>(history.levels.size()));
    }
}

TEST_CASE("singular solution run records errors and stays efficient") {
    LoopConfig config;
    config.order = 2;
    config.maxDofs = 1200;
    const ConvergenceHistory history = runLshape(config);
    REQUIRE(history.levels.size() >= 3);
    double maxRatio = 0.0, minRatio = 1e300;
    for (std::size_t i = 0; i < history.levels.size(); ++i) {
        REQUIRE(history.levels[i].h1Error.has_value());
        const double ratio = history.levels[i].estimator / *history.levels[i].h1Error;
        maxRatio = std::max(maxRatio, ratio);
        minRatio = std::min(minRatio, ratio);
        if (i > 0) CHECK(*history.levels[i].h1Error <= *history.levels[i - 1].h1Error * 1.0001);
    }
    CHECK(maxRatio / minRatio < 100.0);
    CHECK(history.levels.back().estimator < history.levels.front().estimator);
}

TEST_CASE("goal-oriented run with identical primal and dual data") {
    // solving the dual problem with the primal right-hand side must reproduce
    // the primal solution and indicators exactly
    auto mesh = std::make_shared<Mesh>(Mesh::loadFromGeometry("unitsquare"));
    mesh->refineUniform(1, RefinementStrategy::Rgb);
    mesh->refineUniform(1, RefinementStrategy::Nvb3);
    auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
    auto ncFes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::L2, 0));
    auto w = std::make_shared<FeFunction>(ncFes);
    w->setData(nodalInterpolation(
        *SpatialFunction::scalar(mesh, [](double x, double y) { return x + y < 0.5 ? 1.0 : 0.0; }),
        *ncFes));

    BilinearForm blf;
    blf.a = std::make_shared<Constant>(mesh, 1.0);
    LinearForm lf;
    lf.fvec = std::make_shared<CompositeFunction>(
        [](std::span<const Batched> args) {
            Batched out(2, args[0].entities(), args[0].nodes());
            for (int k = 0; k < args[0].nodes(); ++k)
                for (int j = 0; j < args[0].entities(); ++j) out(0, j, k) = args[0](0, j, k);
            return out;
        },
        std::vector<FunctionPtr>{w}, 2);
    const SparseSystem a = assemble(blf, *fes);
    const auto rhs = assemble(lf, *fes);
    std::vector<double> rhsFree(fes->freeDofs().size());
    for (std::size_t i = 0; i < rhsFree.size(); ++i) rhsFree[i] = rhs[fes->freeDofs()[i]];
    const auto solutions = solve(a.restricted(fes->freeDofs()), {rhsFree, rhsFree});
    CHECK(solutions[0] == solutions[1]);

    auto u = std::make_shared<FeFunction>(fes);
    auto z = std::make_shared<FeFunction>(fes);
    u->setFreeData(solutions[0]);
    z->setFreeData(solutions[1]);
    const auto eta2 = goafemIndicators(u, w, 1.0, 1);
    const auto zeta2 = goafemIndicators(z, w, 1.0, 1);
    for (std::size_t t = 0; t < eta2.size(); ++t)
        CHECK(eta2[t] == doctest::Approx(zeta2[t]).epsilon(1e-13));
}

TEST_CASE("goal-oriented short run") {
    LoopConfig config;
    config.maxDofs = 800;
    const ConvergenceHistory history = runGoafem(config);
    REQUIRE(history.levels.size() >= 3);
    for (const auto& r : history.levels) {
        REQUIRE(r.goalEstimate.has_value());
        CHECK(*r.goalEstimate > 0.0);
    }
    CHECK(*history.levels.back().goalEstimate < *history.levels.front().goalEstimate);
}

TEST_CASE("linearization steps on the one-dof problem") {
    SUBCASE("first Kacanov step from zero") {
        auto mesh = crissCrossPtr();
        auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
        FeFunction u(fes);
        ailfemStep(u, Linearization::Kacanov, 0.5, SolverKind::Auto);
        // diffusion mu(0) = 2 doubles the hand-computed stiffness
        CHECK(u.data()[4] == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
    }
    SUBCASE("first Zarantonello step from zero is a damped model-problem solve") {
        auto mesh = crissCrossPtr();
        auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
        FeFunction u(fes);
        ailfemStep(u, Linearization::Zarantonello, 0.5, SolverKind::Auto);
        CHECK(u.data()[4] == doctest::Approx(0.5 / 12.0).epsilon(1e-12));
    }
    SUBCASE("Newton stalls at its fixed point") {
        auto mesh = crissCrossPtr();
        auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
        FeFunction u(fes);
        for (int i = 0; i < 30; ++i) ailfemStep(u, Linearization::Newton, 1.0, SolverKind::Auto);
        const double before = u.data()[4];
        const double update = ailfemStep(u, Linearization::Newton, 1.0, SolverKind::Auto);
        CHECK(update <= 1e-10);
        CHECK(u.data()[4] == doctest::Approx(before).epsilon(1e-10));
    }
    SUBCASE("all methods agree on the limit") {
        auto mesh = crissCrossPtr();
        double limits[3];
        int m = 0;
        for (Linearization method : {Linearization::Zarantonello, Linearization::Kacanov,
                                     Linearization::Newton}) {
            auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
            FeFunction u(fes);
            for (int i = 0; i < 200; ++i) ailfemStep(u, method, 0.5, SolverKind::Auto);
            limits[m++] = u.data()[4];
        }
        CHECK(limits[0] == doctest::Approx(limits[1]).epsilon(1e-8));
        CHECK(limits[1] == doctest::Approx(limits[2]).epsilon(1e-8));
    }
}

TEST_CASE("Kacanov updates contract on a fixed mesh") {
    auto mesh = std::make_shared<Mesh>(Mesh::loadFromGeometry("Lshape"));
    mesh->refineUniform(2, RefinementStrategy::Nvb3);
    auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
    FeFunction u(fes);
    double previous = 1e300;
    for (int i = 0; i < 5; ++i) {
        const double update = ailfemStep(u, Linearization::Kacanov, 0.5, SolverKind::Auto);
        CHECK(update <= previous * (1.0 + 1e-12));
        previous = update;
    }
}

TEST_CASE("quasilinear adaptive run") {
    AilfemConfig config;
    config.loop.maxDofs = 400;
    for (Linearization method : {Linearization::Zarantonello, Linearization::Kacanov,
                                 Linearization::Newton}) {
        config.method = method;
        const ConvergenceHistory history = runAilfem(config);
        REQUIRE(history.levels.size() >= 3);
        for (std::size_t i = 1; i < history.levels.size(); ++i)
            CHECK(history.levels[i].nDofs > history.levels[i - 1].nDofs);
        CHECK(history.levels.back().estimator < history.levels.front().estimator);
    }
}

TEST_CASE("ailfem validates the damping parameter") {
    AilfemConfig config;
    config.delta = 0.0;
    CHECK_THROWS_AS(runAilfem(config), Error);
}

TEST_CASE("linearization names round-trip") {
    for (auto m : {Linearization::Zarantonello, Linearization::Kacanov, Linearization::Newton})
        CHECK(linearizationFromName(linearizationName(m)) == m);
    CHECK_THROWS_AS(linearizationFromName("bogus"), Error);
}
