#include "afem/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace afem {

Barycentric::Barycentric(int dim, std::vector<double> data)
    : dim_(dim), data_(std::move(data)) {
    if (dim_ != 1 && dim_ != 2) throw ShapeError("Barycentric: dim must be 1 or 2");
    if (data_.size() % (dim_ + 1) != 0)
        throw ShapeError("Barycentric: data size not a multiple of dim+1");
    const int n = numPoints();
    for (int k = 0; k < n; ++k) {
        double sum = 0.0;
        for (int i = 0; i <= dim_; ++i) {
            const double v = (*this)(i, k);
            if (v < -1e-14 || v > 1.0 + 1e-14)
                throw ShapeError("Barycentric: coordinate outside [0,1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-14)
            throw ShapeError("Barycentric: coordinates do not sum to 1");
    }
}

Barycentric Barycentric::triangle(const std::vector<std::array<double, 3>>& pts) {
    std::vector<double> data;
    data.reserve(pts.size() * 3);
    for (const auto& p : pts) data.insert(data.end(), {p[0], p[1], p[2]});
    return Barycentric(2, std::move(data));
}

Barycentric Barycentric::edge(const std::vector<std::array<double, 2>>& pts) {
    std::vector<double> data;
    data.reserve(pts.size() * 2);
    for (const auto& p : pts) data.insert(data.end(), {p[0], p[1]});
    return Barycentric(1, std::move(data));
}

Barycentric Barycentric::triangleVertices() {
    return triangle({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
}

Barycentric Barycentric::triangleCentroid() {
    return triangle({{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}});
}

void gaussLegendre01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    // Newton iteration on the Legendre polynomial P_n over [-1,1], then
    // affine map to [0,1] with weights normalized to sum 1.
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int k = 0; k < (n + 1) / 2; ++k) {
        double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k] = 0.5 * (1.0 - x);
        nodes[n - 1 - k] = 0.5 * (1.0 + x);
        weights[k] = 0.5 * w;
        weights[n - 1 - k] = 0.5 * w;
    }
}

namespace {

QuadratureRule gaussRule1d(int order) {
    const int n = (order + 2) / 2; // ceil((order+1)/2)
    std::vector<double> x, w;
    gaussLegendre01(n, x, w);
    std::vector<std::array<double, 2>> pts(n);
    for (int k = 0; k < n; ++k) pts[k] = {x[k], 1.0 - x[k]};
    return {Barycentric::edge(pts), std::move(w), order};
}

void addCentroid(std::vector<std::array<double, 3>>& pts, std::vector<double>& w, double weight) {
    pts.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    w.push_back(weight);
}

// three points (a, a, 1-2a) and cyclic permutations
void addSym3(std::vector<std::array<double, 3>>& pts, std::vector<double>& w,
             double a, double weight) {
    const double c = 1.0 - 2.0 * a;
    pts.push_back({a, a, c});
    pts.push_back({c, a, a});
    pts.push_back({a, c, a});
    w.insert(w.end(), 3, weight);
}

QuadratureRule symmetricRule2d(int order) {
    std::vector<std::array<double, 3>> pts;
    std::vector<double> w;
    switch (order) {
    case 1:
        addCentroid(pts, w, 1.0);
        break;
    case 2:
        addSym3(pts, w, 1.0 / 6.0, 1.0 / 3.0);
        break;
    case 3:
    case 4:
        // 6-point rule of degree 4, all weights positive
        addSym3(pts, w, 0.091576213509770743, 0.10995174365532187);
        addSym3(pts, w, 0.44594849091596489, 0.22338158967801147);
        break;
    case 5:
        // 7-point rule of degree 5
        addCentroid(pts, w, 0.225);
        addSym3(pts, w, 0.47014206410511509, 0.13239415278850618);
        addSym3(pts, w, 0.10128650732345634, 0.12593918054482715);
        break;
    default:
        throw Error("symmetricRule2d: no table for this order");
    }
    return {Barycentric::triangle(pts), std::move(w), order};
}

QuadratureRule duffyRule2d(int order) {
    // Tensor Gauss rule on [0,1]^2 mapped through (s,t) -> (s, t(1-s)).
    // The integrand picks up the Jacobian (1-s); weights are normalized by
    // the reference triangle measure 1/2.
    const int n = (order + 3) / 2; // exact in s up to degree order+1
    std::vector<double> x, wx;
    gaussLegendre01(n, x, wx);
    std::vector<std::array<double, 3>> pts;
    std::vector<double> w;
    pts.reserve(n * n);
    w.reserve(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double s = x[i], t = x[j];
            const double x1 = s, x2 = t * (1.0 - s);
            pts.push_back({1.0 - x1 - x2, x1, x2});
            w.push_back(2.0 * wx[i] * wx[j] * (1.0 - s));
        }
    return {Barycentric::triangle(pts), std::move(w), order};
}

} // namespace

QuadratureRule QuadratureRule::ofOrder(int order, int dim) {
    if (order < 1) throw Error("QuadratureRule::ofOrder: order must be >= 1");
    if (dim == 1) return gaussRule1d(order);
    if (dim == 2) return order <= 5 ? symmetricRule2d(order) : duffyRule2d(order);
    throw Error("QuadratureRule::ofOrder: dim must be 1 or 2");
}

} // namespace afem
