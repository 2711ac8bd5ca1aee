#include <cmath>
#include <random>

#include "afem/estimators.hpp"
#include "afem/fe_function.hpp"
#include "afem/integration.hpp"
#include "afem/refinement.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace afem;

namespace {

std::shared_ptr<Mesh> crissCrossPtr() { return std::make_shared<Mesh>(crissCrossSquare()); }

FunctionPtr coordinateField(std::shared_ptr<const Mesh> mesh) {
    return std::make_shared<SpatialFunction>(mesh, 2,
                                             [](double x, double y, std::span<double> out) {
                                                 out[0] = x;
                                                 out[1] = y;
                                             });
}

} // namespace

TEST_CASE("evaluation of the basic function types") {
    auto mesh = crissCrossPtr();
    const Barycentric centroid = Barycentric::triangleCentroid();

    SUBCASE("identity field at the centroid of element 0") {
        const std::vector<int> elems{0};
        const Batched val = coordinateField(mesh)->eval(centroid, elems);
        CHECK(val(0, 0, 0) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(val(1, 0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    }
    SUBCASE("constants are independent of element and point") {
        const Constant c(mesh, 7.0);
        const Batched val = c.eval(centroid, allElementIndices(*mesh));
        for (int j = 0; j < val.entities(); ++j) CHECK(val(0, j, 0) == 7.0);
    }
    SUBCASE("composite x * u^2 with u == 2") {
        auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
        auto u = std::make_shared<FeFunction>(fes);
        u->setData(2.0);
        auto x1 = SpatialFunction::scalar(mesh, [](double x, double) { return x; });
        const CompositeFunction f(
            [](std::span<const Batched> args) { return args[0] * (args[1] * args[1]); },
            {x1, u}, 1);
        const std::vector<int> elems{0};
        const Batched val = f.eval(centroid, elems);
        CHECK(val(0, 0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("composite rejects a combinator with the wrong output shape") {
        auto x1 = SpatialFunction::scalar(mesh, [](double x, double) { return x; });
        const CompositeFunction bad(
            [](std::span<const Batched> args) {
                Batched two(2, args[0].entities(), args[0].nodes());
                return two;
            },
            {x1}, 1);
        CHECK_THROWS_AS(bad.eval(centroid, allElementIndices(*mesh)), ShapeError);
    }
}

TEST_CASE("edge evaluation") {
    auto mesh = crissCrossPtr();
    const Barycentric mid = Barycentric::edge({{0.5, 0.5}});

    SUBCASE("coordinate component along edge 0") {
        auto x1 = SpatialFunction::scalar(mesh, [](double x, double) { return x; });
        const std::vector<int> edges{0};
        CHECK(x1->evalEdge(mid, edges)(0, 0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("constant") {
        const Constant c(mesh, 3.0);
        const std::vector<int> edges{5};
        CHECK(c.evalEdge(mid, edges)(0, 0, 0) == 3.0);
    }
    SUBCASE("gradient of a P1 function has no edge trace") {
        auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
        auto u = std::make_shared<FeFunction>(fes);
        const Gradient grad(u);
        CHECK_FALSE(grad.hasEdgeTrace());
        const std::vector<int> edges{0};
        CHECK_THROWS_AS(grad.evalEdge(mid, edges), NoEdgeTraceError);
    }
    SUBCASE("edge parameter runs from start to end") {
        auto x1 = SpatialFunction::scalar(mesh, [](double x, double) { return x; });
        const Barycentric nearEnd = Barycentric::edge({{0.9, 0.1}});
        const std::vector<int> edges{0}; // (0,0) -> (1,0)
        CHECK(x1->evalEdge(nearEnd, edges)(0, 0, 0) == doctest::Approx(0.9).epsilon(1e-14));
    }
    SUBCASE("H1 edge trace matches element evaluation") {
        auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 3));
        auto u = std::make_shared<FeFunction>(fes);
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> coeffs(fes->numDofs());
        for (auto& c : coeffs) c = dist(rng);
        u->setData(coeffs);
        // edge 4 = (1,4): interior edge of elements 0 and 1
        const Barycentric pts = Barycentric::edge({{0.3, 0.7}, {0.8, 0.2}});
        const std::vector<int> edges{4};
        const Batched traced = u->evalEdge(pts, edges);
        // evaluate through element 0: edge (1,4) is its local edge 1 and the
        // orientation matches, so vertex 1 carries the start weight
        const Barycentric inElement =
            Barycentric::triangle({{0.0, 0.7, 0.3}, {0.0, 0.2, 0.8}});
        const std::vector<int> elem{0};
        const Batched direct = u->eval(inElement, elem);
        CHECK(traced(0, 0, 0) == doctest::Approx(direct(0, 0, 0)).epsilon(1e-13));
        CHECK(traced(0, 0, 1) == doctest::Approx(direct(0, 0, 1)).epsilon(1e-13));
    }
}

TEST_CASE("stale finite element functions are rejected") {
    auto mesh = crissCrossPtr();
    auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
    auto u = std::make_shared<FeFunction>(fes);
    const std::vector<int> marked{0};
    mesh->refineLocally(marked, RefinementStrategy::Nvb3);
    const std::vector<int> elems{0};
    CHECK_THROWS_AS(u->eval(Barycentric::triangleCentroid(), elems), StaleDataError);
}

TEST_CASE("batched evaluation equals pointwise evaluation") {
    auto mesh = crissCrossPtr();
    auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 2));
    auto u = std::make_shared<FeFunction>(fes);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> coeffs(fes->numDofs());
    for (auto& c : coeffs) c = dist(rng);
    u->setData(coeffs);

    std::vector<std::array<double, 3>> pts;
    for (int i = 0; i < 5; ++i) {
        double a = std::abs(dist(rng)), b = std::abs(dist(rng));
        if (a + b > 1.0) {
            a = 1.0 - a;
            b = 1.0 - b;
        }
        pts.push_back({1.0 - a - b, a, b});
    }
    const Barycentric bary = Barycentric::triangle(pts);
    const Batched batch = u->eval(bary, allElementIndices(*mesh));
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 5; ++k) {
            const Barycentric single = Barycentric::triangle({pts[k]});
            const std::vector<int> elem{j};
            CHECK(u->eval(single, elem)(0, 0, 0) == batch(0, j, k));
        }
}

TEST_CASE("element integration") {
    auto mesh = crissCrossPtr();
    const auto qr1 = QuadratureRule::ofOrder(1, 2);

    SUBCASE("constant one integrates to the element areas") {
        const Constant one(mesh, 1.0);
        const Batched vals = integrateElement(one, qr1);
        double total = 0.0;
        for (int t = 0; t < 4; ++t) {
            CHECK(vals(0, t, 0) == doctest::Approx(0.25).epsilon(1e-14));
            total += vals(0, t, 0);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("linear integrand is exact with the centroid rule") {
        auto x1 = SpatialFunction::scalar(mesh, [](double x, double) { return x; });
        const std::vector<int> elems{0};
        CHECK(integrateElement(*x1, qr1, elems)(0, 0, 0) ==
              doctest::Approx(0.125).epsilon(1e-14));
    }
    SUBCASE("quadratic monomial on the reference triangle") {
        auto ref = std::make_shared<Mesh>(
            Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}, {{{{0, 1}}, {{1, 2}}, {{2, 0}}}}));
        auto f = SpatialFunction::scalar(ref, [](double x, double) { return x * x; });
        const Batched vals = integrateElement(*f, QuadratureRule::ofOrder(2, 2));
        CHECK(vals(0, 0, 0) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    }
    SUBCASE("area sums are rule independent") {
        const Constant one(mesh, 1.0);
        for (int order : {1, 3, 5, 8}) {
            const Batched vals = integrateElement(one, QuadratureRule::ofOrder(order, 2));
            double total = 0.0;
            for (int t = 0; t < vals.entities(); ++t) total += vals(0, t, 0);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("edge integration") {
    auto mesh = crissCrossPtr();
    const auto qr = QuadratureRule::ofOrder(2, 1);

    SUBCASE("edge lengths") {
        const Constant one(mesh, 1.0);
        const std::vector<int> edges{7}; // (0,1) -> (0.5,0.5)
        CHECK(integrateEdge(one, qr, edges)(0, 0, 0) ==
              doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    }
    SUBCASE("vanishing and linear components on the bottom edge") {
        auto x2 = SpatialFunction::scalar(mesh, [](double, double y) { return y; });
        auto x1 = SpatialFunction::scalar(mesh, [](double x, double) { return x; });
        const std::vector<int> edges{0};
        CHECK(integrateEdge(*x2, qr, edges)(0, 0, 0) == doctest::Approx(0.0));
        CHECK(integrateEdge(*x1, qr, edges)(0, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("normal jump integration") {
    auto mesh = crissCrossPtr();
    const auto qr = QuadratureRule::ofOrder(1, 1);

    SUBCASE("globally affine gradient has zero interior jumps") {
        auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
        auto u = std::make_shared<FeFunction>(fes);
        auto x1 = SpatialFunction::scalar(mesh, [](double x, double) { return x; });
        u->setData(nodalInterpolation(*x1, *fes));
        const Gradient grad(u);
        const Batched jumps = integrateNormalJump(grad, qr, {{squareCombinator(), {}, {}}});
        for (int e = 0; e < mesh->numEdges(); ++e)
            if (!mesh->isBoundaryEdge(e)) CHECK(jumps(0, e, 0) == doctest::Approx(0.0));
    }
    SUBCASE("boundary zeroing step") {
        auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
        auto u = std::make_shared<FeFunction>(fes);
        u->setData(std::vector<double>{0, 0, 0, 0, 1}); // hat at the center
        const Gradient grad(u);
        const Batched jumps = integrateNormalJump(
            grad, qr,
            {{zeroCombinator(), {}, mesh->boundaryEdges()}, {squareCombinator(), {}, {}}});
        for (int e : mesh->boundaryEdges()) CHECK(jumps(0, e, 0) == 0.0);
        bool anyInterior = false;
        for (int e = 0; e < mesh->numEdges(); ++e)
            if (!mesh->isBoundaryEdge(e) && jumps(0, e, 0) > 1e-12) anyInterior = true;
        CHECK(anyInterior);
    }
    SUBCASE("subtraction step against the exact trace") {
        auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
        auto u = std::make_shared<FeFunction>(fes);
        auto x1 = SpatialFunction::scalar(mesh, [](double x, double) { return x; });
        u->setData(nodalInterpolation(*x1, *fes)); // grad u = (1, 0)
        auto trace = std::make_shared<Constant>(mesh, 1.0); // (1,0).n on x = 1
        const std::vector<int> rightEdge{3};
        const Batched jumps = integrateNormalJump(
            Gradient(u), qr,
            {{subtractCombinator(), {trace}, rightEdge}, {squareCombinator(), {}, rightEdge}},
            rightEdge);
        CHECK(jumps(0, 0, 0) == doctest::Approx(0.0));
    }
    SUBCASE("even post-processing is invariant under element relabeling") {
        // relabeling vertices flips the stored orientation of interior edges;
        // squared jumps must not change
        auto meshB = std::make_shared<Mesh>(
            Mesh({{0.5, 0.5}, {1, 0}, {1, 1}, {0, 1}, {0, 0}},
                 {{4, 1, 0}, {1, 2, 0}, {2, 3, 0}, {3, 4, 0}},
                 {{{{4, 1}}, {{3, 4}}}, {{{1, 2}}, {{2, 3}}}}));
        auto mkJump = [&](std::shared_ptr<Mesh> m) {
            auto fes = std::make_shared<FeSpace>(m, FiniteElement(Conformity::H1, 1));
            auto u = std::make_shared<FeFunction>(fes);
            auto bump = SpatialFunction::scalar(
                m, [](double x, double y) { return x * x + 0.5 * y * y * y; });
            u->setData(nodalInterpolation(*bump, *fes));
            return integrateNormalJump(Gradient(u), QuadratureRule::ofOrder(1, 1),
                                       {{squareCombinator(), {}, {}}});
        };
        const Batched a = mkJump(mesh);
        const Batched b = mkJump(meshB);
        auto key = [](const Mesh& m, int e) {
            const auto& p = m.coordinates()[m.edges()[e][0]];
            const auto& q = m.coordinates()[m.edges()[e][1]];
            return std::pair<double, double>{0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])};
        };
        std::map<std::pair<double, double>, double> valuesB;
        for (int e = 0; e < meshB->numEdges(); ++e) valuesB[key(*meshB, e)] = b(0, e, 0);
        for (int e = 0; e < mesh->numEdges(); ++e)
            CHECK(a(0, e, 0) == doctest::Approx(valuesB.at(key(*mesh, e))).epsilon(1e-13));
    }
    SUBCASE("plain jumps of piecewise constants") {
        auto ncFes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::L2, 0));
        auto w = std::make_shared<FeFunction>(ncFes);
        w->setData(std::vector<double>{10, 20, 30, 40});
        const Batched jumps = integrateJump(*w, qr);
        // edge 4 sits between elements 0 and 1; element 0 induces its
        // orientation, so the jump is w0 - w1 integrated over length sqrt(.5)
        CHECK(jumps(0, 4, 0) == doctest::Approx(-10.0 * std::sqrt(0.5)).epsilon(1e-14));
        // boundary edges carry the single-sided value
        CHECK(jumps(0, 0, 0) == doctest::Approx(10.0).epsilon(1e-14));
    }
    SUBCASE("post-processing outside the integrated set fails") {
        auto fes = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
        auto u = std::make_shared<FeFunction>(fes);
        const std::vector<int> subset{0, 1};
        const std::vector<int> outside{5};
        CHECK_THROWS_AS(
            integrateNormalJump(Gradient(u), qr, {{squareCombinator(), {}, outside}}, subset),
            Error);
    }
}
