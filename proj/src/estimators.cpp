#include "afem/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace afem {

std::vector<double> estimateResidual(const Mesh& mesh, const ResidualParts& parts) {
    const int nT = mesh.numElements();
    const auto& area = mesh.affineData().area;
    std::vector<double> eta2(nT, 0.0);

    if (parts.volumeIntegrand) {
        if (parts.volumeIntegrand->components() != 1)
            throw ShapeError("estimateResidual: volume integrand must be scalar");
        const Batched vol = integrateElement(*parts.volumeIntegrand, parts.qrVolume);
        for (int t = 0; t < nT; ++t) eta2[t] += area[t] * vol(0, t, 0);
    }
    if (parts.jumpField) {
        const Batched edge = integrateNormalJump(*parts.jumpField, parts.qrEdge, parts.post);
        const auto& e2e = mesh.element2edges();
        for (int t = 0; t < nT; ++t) {
            const double hT = std::sqrt(area[t]);
            eta2[t] += hT * (edge(0, e2e[t][0], 0) + edge(0, e2e[t][1], 0) + edge(0, e2e[t][2], 0));
        }
    }
    return eta2;
}

std::vector<double> estimatePoissonP1(std::shared_ptr<const FeFunction> u, FunctionPtr load) {
    const Mesh& mesh = u->mesh();
    ResidualParts parts;
    parts.volumeIntegrand = std::make_shared<CompositeFunction>(
        squareCombinator(), std::vector<FunctionPtr>{std::move(load)}, 1);
    parts.qrVolume = QuadratureRule::ofOrder(1, 2);
    parts.jumpField = std::make_shared<Gradient>(std::move(u));
    parts.qrEdge = QuadratureRule::ofOrder(1, 1);
    parts.post = {{zeroCombinator(), {}, mesh.boundaryEdges()},
                  {squareCombinator(), {}, {}}};
    return estimateResidual(mesh, parts);
}

Combinator squareCombinator() {
    return [](std::span<const Batched> args) {
        return args[0].map([](double x) { return x * x; });
    };
}

Combinator zeroCombinator() {
    return [](std::span<const Batched> args) {
        return args[0].map([](double) { return 0.0; });
    };
}

Combinator subtractCombinator() {
    return [](std::span<const Batched> args) { return args[0] - args[1]; };
}

std::vector<int> markDoerfler(std::span<const double> eta2, double theta) {
    if (!(theta > 0.0) || theta > 1.0) throw Error("markDoerfler: theta must be in (0, 1]");
    std::vector<int> order(eta2.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return eta2[a] > eta2[b]; });
    // summing the total in sorted order makes the prefix comparison exact,
    // so theta = 1 stops right after the last nonzero indicator
    double total = 0.0;
    for (int t : order) total += eta2[t];
    if (total <= 0.0) return {};
    std::vector<int> marked;
    double sum = 0.0;
    for (int t : order) {
        if (sum >= theta * total) break;
        marked.push_back(t);
        sum += eta2[t];
    }
    return marked;
}

} // namespace afem
