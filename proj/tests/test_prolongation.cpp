#include <cmath>
#include <random>

#include "afem/fe_function.hpp"
#include "afem/prolongation.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace afem;

namespace {

// locate a physical point among the children of a parent element
std::pair<int, std::array<double, 3>> locateInChildren(const Mesh& mesh,
                                                       const RefinementRecord& rec, int parent,
                                                       double x, double y) {
    for (int c = 0; c < rec.childrenCount[parent]; ++c) {
        const int t = rec.childrenStart[parent] + c;
        const auto& el = mesh.elements()[t];
        const auto& p0 = mesh.coordinates()[el[0]];
        const auto& p1 = mesh.coordinates()[el[1]];
        const auto& p2 = mesh.coordinates()[el[2]];
        const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
        const double l1 = ((x - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (y - p0[1])) / det;
        const double l2 = ((p1[0] - p0[0]) * (y - p0[1]) - (x - p0[0]) * (p1[1] - p0[1])) / det;
        const double l0 = 1.0 - l1 - l2;
        if (l0 >= -1e-12 && l1 >= -1e-12 && l2 >= -1e-12)
            return {t, {std::clamp(l0, 0.0, 1.0), std::clamp(l1, 0.0, 1.0), std::clamp(l2, 0.0, 1.0)}};
    }
    throw std::runtime_error("point not found in any child");
}

} // namespace

TEST_CASE("lowest-order prolongation under uniform refinement") {
    auto mesh = std::make_shared<Mesh>(crissCrossSquare());
    auto coarse = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
    const auto rec = mesh->refineLocally(allElementIndices(*mesh), RefinementStrategy::Nvb3);
    auto fine = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
    const Prolongation P = Prolongation::lowestOrder(*coarse, *fine, rec);

    std::vector<double> coeffs{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> prolonged = P.apply(coeffs);
    REQUIRE(static_cast<int>(prolonged.size()) == fine->numDofs());
    // surviving vertices keep their values
    for (int v = 0; v < 5; ++v) CHECK(prolonged[v] == coeffs[v]);
    // midpoints average their endpoints; edge 0 = (0,1)
    CHECK(prolonged[rec.edgeMidpoint[0]] == doctest::Approx(1.5));
    CHECK(prolonged[rec.edgeMidpoint[7]] == doctest::Approx(4.5)); // edge (3,4)

    SUBCASE("all-ones stays all-ones") {
        const std::vector<double> ones(coarse->numDofs(), 1.0);
        for (double v : P.apply(ones)) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("general prolongation produces the identical matrix at order 1") {
        const Prolongation G = Prolongation::general(*coarse, *fine, rec);
        REQUIRE(G.rows() == P.rows());
        for (int r = 0; r < P.rows(); ++r) {
            const auto a = P.row(r), b = G.row(r);
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(a[i].first == b[i].first);
                CHECK(a[i].second == doctest::Approx(b[i].second).epsilon(1e-13));
            }
        }
    }
    SUBCASE("dimension mismatch is rejected") {
        const std::vector<double> wrong(3, 0.0);
        CHECK_THROWS_AS(P.apply(wrong), ShapeError);
    }
}

TEST_CASE("piecewise constant prolongation inherits parent values") {
    auto mesh = std::make_shared<Mesh>(crissCrossSquare());
    auto coarse = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::L2, 0));
    const std::vector<int> marked{1, 2};
    const auto rec = mesh->refineLocally(marked, RefinementStrategy::Nvb3);
    auto fine = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::L2, 0));
    const Prolongation P = Prolongation::lowestOrder(*coarse, *fine, rec);
    const std::vector<double> coeffs{10, 20, 30, 40};
    const std::vector<double> prolonged = P.apply(coeffs);
    for (int t = 0; t < rec.oldNumElements; ++t)
        for (int c = 0; c < rec.childrenCount[t]; ++c)
            CHECK(prolonged[rec.childrenStart[t] + c] == coeffs[t]);

    SUBCASE("general prolongation matches for piecewise constants") {
        const Prolongation G = Prolongation::general(*coarse, *fine, rec);
        CHECK(G.apply(coeffs) == prolonged);
    }
}

TEST_CASE("prolongation of an order-2 function is exact on the nested space") {
    auto mesh = std::make_shared<Mesh>(crissCrossSquare());
    auto coarse = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 2));
    auto u = std::make_shared<FeFunction>(coarse);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> coeffs(coarse->numDofs());
    for (auto& c : coeffs) c = dist(rng);
    u->setData(coeffs);

    // sample points, evaluated before refinement
    struct Sample {
        int parent;
        double x, y, value;
    };
    std::vector<Sample> samples;
    for (int i = 0; i < 50; ++i) {
        const int t = static_cast<int>(rng() % 4);
        double a = 0.5 * (dist(rng) + 1), b = 0.5 * (dist(rng) + 1);
        if (a + b > 1) {
            a = 1 - a;
            b = 1 - b;
        }
        const Barycentric pt = Barycentric::triangle({{1 - a - b, a, b}});
        const std::vector<int> elem{t};
        const double value = u->eval(pt, elem)(0, 0, 0);
        const auto& el = mesh->elements()[t];
        const double x = (1 - a - b) * mesh->coordinates()[el[0]][0] +
                         a * mesh->coordinates()[el[1]][0] + b * mesh->coordinates()[el[2]][0];
        const double y = (1 - a - b) * mesh->coordinates()[el[0]][1] +
                         a * mesh->coordinates()[el[1]][1] + b * mesh->coordinates()[el[2]][1];
        samples.push_back({t, x, y, value});
    }

    const std::vector<int> marked{0};
    const auto rec = mesh->refineLocally(marked, RefinementStrategy::Nvb3);
    auto fine = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 2));
    const Prolongation P = Prolongation::general(*coarse, *fine, rec);
    auto v = std::make_shared<FeFunction>(fine);
    v->setData(P.apply(u->data()));

    for (const auto& s : samples) {
        const auto [child, bary] = locateInChildren(*mesh, rec, s.parent, s.x, s.y);
        const Barycentric pt = Barycentric::triangle({{bary[0], bary[1], bary[2]}});
        const std::vector<int> elem{child};
        CHECK(v->eval(pt, elem)(0, 0, 0) == doctest::Approx(s.value).epsilon(1e-12));
    }
}

TEST_CASE("prolongation validates the record and spaces") {
    auto mesh = std::make_shared<Mesh>(crissCrossSquare());
    auto coarse = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));
    const auto rec = mesh->refineLocally(allElementIndices(*mesh), RefinementStrategy::Nvb3);
    auto fine = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 1));

    SUBCASE("coarse and fine must differ by exactly this record") {
        CHECK_THROWS_AS(Prolongation::lowestOrder(*fine, *fine, rec), StaleDataError);
        CHECK_THROWS_AS(Prolongation::general(*coarse, *coarse, rec), StaleDataError);
    }
    SUBCASE("lowest-order variant rejects higher order") {
        auto p2coarse = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 2));
        const auto rec2 = mesh->refineLocally(std::vector<int>{0}, RefinementStrategy::Nvb3);
        auto p2fine = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 2));
        CHECK_THROWS_AS(Prolongation::lowestOrder(*p2coarse, *p2fine, rec2), Error);
        CHECK_NOTHROW(Prolongation::general(*p2coarse, *p2fine, rec2));
    }
}

TEST_CASE("prolongation across a no-op refinement is the identity") {
    auto mesh = std::make_shared<Mesh>(crissCrossSquare());
    auto coarse = std::make_shared<FeSpace>(mesh, FiniteElement(Conformity::H1, 2));
    const auto rec = mesh->refineLocally({}, RefinementStrategy::Nvb3);
    REQUIRE(rec.isNoOp());
    const Prolongation P = Prolongation::general(*coarse, *coarse, rec);
    std::vector<double> coeffs(coarse->numDofs());
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = static_cast<double>(i);
    CHECK(P.apply(coeffs) == coeffs);
}
