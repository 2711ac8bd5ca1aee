#include "afem/finite_element.hpp"

#include <Eigen/Dense>

namespace afem {

namespace {

int simplexDim(int p) { return (p + 1) * (p + 2) / 2; }

// multi-indices (i,j,k), i+j+k = p, ordered i descending, then j descending
int bernsteinIndex(int p, int i, int j) {
    const int offset = ((p - i) * (p - i + 1)) / 2;
    return offset + (p - i - j);
}

// all Bernstein values of degree p at one barycentric point, built with the
// triangular degree recurrence
void bernsteinValues(int p, const double* lambda, std::vector<double>& out) {
    std::vector<double> prev{1.0}, cur;
    for (int d = 1; d <= p; ++d) {
        cur.assign(simplexDim(d), 0.0);
        for (int i = d - 1; i >= 0; --i)
            for (int j = d - 1 - i; j >= 0; --j) {
                const double v = prev[bernsteinIndex(d - 1, i, j)];
                if (v == 0.0) continue;
                cur[bernsteinIndex(d, i + 1, j)] += lambda[0] * v;
                cur[bernsteinIndex(d, i, j + 1)] += lambda[1] * v;
                cur[bernsteinIndex(d, i, j)] += lambda[2] * v;
            }
        prev.swap(cur);
    }
    out = prev;
}

// first derivatives d/dlambda_a of all degree-p Bernstein polynomials, from
// the degree-(p-1) values
void bernsteinBaryGradients(int p, const std::vector<double>& lower,
                            std::array<std::vector<double>, 3>& out) {
    const int n = simplexDim(p);
    for (auto& v : out) v.assign(n, 0.0);
    for (int i = p - 1; i >= 0; --i)
        for (int j = p - 1 - i; j >= 0; --j) {
            const double v = p * lower[bernsteinIndex(p - 1, i, j)];
            out[0][bernsteinIndex(p, i + 1, j)] += v;
            out[1][bernsteinIndex(p, i, j + 1)] += v;
            out[2][bernsteinIndex(p, i, j)] += v;
        }
}

} // namespace

FiniteElement::FiniteElement(Conformity conformity, int order)
    : conformity_(conformity), order_(order) {
    if (conformity == Conformity::H1 && order < 1)
        throw Error("FiniteElement: H1 family needs order >= 1");
    if (conformity == Conformity::L2 && order < 0)
        throw Error("FiniteElement: L2 family needs order >= 0");

    const int p = order_;
    if (p == 0) {
        nodes_ = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        bernsteinToNodal_ = {1.0};
        return;
    }

    auto pushNode = [this, p](int i, int j, int k) {
        nodes_.insert(nodes_.end(),
                      {static_cast<double>(i) / p, static_cast<double>(j) / p,
                       static_cast<double>(k) / p});
    };
    pushNode(p, 0, 0);
    pushNode(0, p, 0);
    pushNode(0, 0, p);
    for (int k = 1; k < p; ++k) pushNode(p - k, k, 0); // edge (0,1)
    for (int k = 1; k < p; ++k) pushNode(0, p - k, k); // edge (1,2)
    for (int k = 1; k < p; ++k) pushNode(k, 0, p - k); // edge (2,0)
    for (int i = p - 1; i >= 1; --i)
        for (int j = p - 1 - i; j >= 1; --j) pushNode(i, j, p - i - j);

    // nodal basis coefficients from the Bernstein Vandermonde matrix
    const int n = localDofCount();
    Eigen::MatrixXd vandermonde(n, n);
    std::vector<double> values;
    for (int a = 0; a < n; ++a) {
        bernsteinValues(p, &nodes_[3 * a], values);
        for (int b = 0; b < n; ++b) vandermonde(a, b) = values[b];
    }
    const Eigen::MatrixXd coeff = vandermonde.transpose().inverse();
    bernsteinToNodal_.resize(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) bernsteinToNodal_[a * n + b] = coeff(a, b);
}

int FiniteElement::interiorDofCount() const {
    if (conformity_ == Conformity::L2) return localDofCount();
    return (order_ - 1) * (order_ - 2) / 2;
}

Batched FiniteElement::evalValues(const Barycentric& bary) const {
    if (bary.dim() != 2) throw ShapeError("evalValues: needs 2D barycentric coordinates");
    const int n = localDofCount(), nPts = bary.numPoints();
    Batched out(1, n, nPts);
    std::vector<double> values;
    for (int k = 0; k < nPts; ++k) {
        bernsteinValues(order_, bary.point(k).data(), values);
        for (int a = 0; a < n; ++a) {
            double s = 0.0;
            for (int b = 0; b < n; ++b) s += bernsteinToNodal_[a * n + b] * values[b];
            out(0, a, k) = s;
        }
    }
    return out;
}

Batched FiniteElement::evalGradients(const Barycentric& bary) const {
    if (bary.dim() != 2) throw ShapeError("evalGradients: needs 2D barycentric coordinates");
    const int n = localDofCount(), nPts = bary.numPoints(), p = order_;
    Batched out(2, n, nPts);
    if (p == 0) return out;
    std::vector<double> lower;
    std::array<std::vector<double>, 3> dl;
    for (int k = 0; k < nPts; ++k) {
        bernsteinValues(p - 1, bary.point(k).data(), lower);
        bernsteinBaryGradients(p, lower, dl);
        for (int a = 0; a < n; ++a) {
            double gx = 0.0, gy = 0.0;
            for (int b = 0; b < n; ++b) {
                const double c = bernsteinToNodal_[a * n + b];
                // reference map lambda = (1 - x - y, x, y)
                gx += c * (dl[1][b] - dl[0][b]);
                gy += c * (dl[2][b] - dl[0][b]);
            }
            out(0, a, k) = gx;
            out(1, a, k) = gy;
        }
    }
    return out;
}

Batched FiniteElement::evalHessians(const Barycentric& bary) const {
    if (bary.dim() != 2) throw ShapeError("evalHessians: needs 2D barycentric coordinates");
    const int n = localDofCount(), nPts = bary.numPoints(), p = order_;
    Batched out(4, n, nPts);
    if (p <= 1) return out;

    std::vector<double> lower;
    std::array<std::array<std::vector<double>, 3>, 3> dd;
    const int np = simplexDim(p);
    for (int k = 0; k < nPts; ++k) {
        bernsteinValues(p - 2, bary.point(k).data(), lower);
        for (auto& row : dd)
            for (auto& v : row) v.assign(np, 0.0);
        for (int i = p - 2; i >= 0; --i)
            for (int j = p - 2 - i; j >= 0; --j) {
                const double v = p * (p - 1) * lower[bernsteinIndex(p - 2, i, j)];
                dd[0][0][bernsteinIndex(p, i + 2, j)] += v;
                dd[1][1][bernsteinIndex(p, i, j + 2)] += v;
                dd[2][2][bernsteinIndex(p, i, j)] += v;
                dd[0][1][bernsteinIndex(p, i + 1, j + 1)] += v;
                dd[0][2][bernsteinIndex(p, i + 1, j)] += v;
                dd[1][2][bernsteinIndex(p, i, j + 1)] += v;
            }
        auto d2 = [&](int a, int b, int idx) { return a <= b ? dd[a][b][idx] : dd[b][a][idx]; };
        for (int a = 0; a < n; ++a) {
            double hxx = 0.0, hxy = 0.0, hyy = 0.0;
            for (int b = 0; b < n; ++b) {
                const double c = bernsteinToNodal_[a * n + b];
                hxx += c * (d2(1, 1, b) - 2.0 * d2(0, 1, b) + d2(0, 0, b));
                hxy += c * (d2(1, 2, b) - d2(0, 1, b) - d2(0, 2, b) + d2(0, 0, b));
                hyy += c * (d2(2, 2, b) - 2.0 * d2(0, 2, b) + d2(0, 0, b));
            }
            out(0, a, k) = hxx;
            out(1, a, k) = hxy;
            out(2, a, k) = hxy;
            out(3, a, k) = hyy;
        }
    }
    return out;
}

Batched FiniteElement::evalEdgeValues(const Barycentric& bary) const {
    if (bary.dim() != 1) throw ShapeError("evalEdgeValues: needs 1D barycentric coordinates");
    if (conformity_ != Conformity::H1)
        throw NoEdgeTraceError("evalEdgeValues: discontinuous family has no edge trace");
    const int p = order_, nPts = bary.numPoints();
    // trace node parameters in edge-dof order [start, end, interior ascending]
    std::vector<double> t(p + 1);
    t[0] = 0.0;
    t[1] = 1.0;
    for (int m = 1; m < p; ++m) t[m + 1] = static_cast<double>(m) / p;
    Batched out(1, p + 1, nPts);
    for (int k = 0; k < nPts; ++k) {
        const double x = bary(0, k); // parameter from start to end
        for (int m = 0; m <= p; ++m) {
            double v = 1.0;
            for (int l = 0; l <= p; ++l)
                if (l != m) v *= (x - t[l]) / (t[m] - t[l]);
            out(0, m, k) = v;
        }
    }
    return out;
}

} // namespace afem
