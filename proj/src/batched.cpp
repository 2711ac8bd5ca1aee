#include "afem/batched.hpp"

#include <string>

namespace afem {

namespace {

int broadcastDim(int a, int b, const char* what) {
    if (a == b) return a;
    if (a == 1) return b;
    if (b == 1) return a;
    throw ShapeError(std::string("Batched: incompatible ") + what + " dimensions " +
                     std::to_string(a) + " vs " + std::to_string(b));
}

} // namespace

Batched Batched::map(const std::function<double(double)>& f) const {
    Batched out(nc_, ne_, nn_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = f(data_[i]);
    return out;
}

Batched Batched::zip(const Batched& a, const Batched& b,
                     const std::function<double(double, double)>& f) {
    const int nc = broadcastDim(a.nc_, b.nc_, "component");
    const int ne = broadcastDim(a.ne_, b.ne_, "entity");
    const int nn = broadcastDim(a.nn_, b.nn_, "node");
    Batched out(nc, ne, nn);
    for (int k = 0; k < nn; ++k)
        for (int j = 0; j < ne; ++j)
            for (int i = 0; i < nc; ++i)
                out(i, j, k) = f(a.bc(i, j, k), b.bc(i, j, k));
    return out;
}

Batched Batched::operator+(const Batched& o) const {
    return zip(*this, o, [](double x, double y) { return x + y; });
}

Batched Batched::operator-(const Batched& o) const {
    return zip(*this, o, [](double x, double y) { return x - y; });
}

Batched Batched::operator*(const Batched& o) const {
    return zip(*this, o, [](double x, double y) { return x * y; });
}

Batched Batched::operator*(double s) const {
    return map([s](double x) { return x * s; });
}

Batched Batched::operator+(double s) const {
    return map([s](double x) { return x + s; });
}

Batched vectorProduct(const Batched& a, const Batched& b, MatShape sa, MatShape sb) {
    if (sa.rows * sa.cols != a.components())
        throw ShapeError("vectorProduct: shape of first factor does not match component count");
    if (sb.rows * sb.cols != b.components())
        throw ShapeError("vectorProduct: shape of second factor does not match component count");
    // effective sizes after optional transposition
    const int ra = sa.transposed ? sa.cols : sa.rows;
    const int ca = sa.transposed ? sa.rows : sa.cols;
    const int rb = sb.transposed ? sb.cols : sb.rows;
    const int cb = sb.transposed ? sb.rows : sb.cols;
    if (ca != rb)
        throw ShapeError("vectorProduct: inner dimensions do not match (" +
                         std::to_string(ca) + " vs " + std::to_string(rb) + ")");
    const int ne = (a.entities() == b.entities()) ? a.entities()
                   : (a.entities() == 1 ? b.entities()
                   : (b.entities() == 1 ? a.entities()
                   : throw ShapeError("vectorProduct: incompatible entity dimensions")));
    const int nn = (a.nodes() == b.nodes()) ? a.nodes()
                   : (a.nodes() == 1 ? b.nodes()
                   : (b.nodes() == 1 ? a.nodes()
                   : throw ShapeError("vectorProduct: incompatible node dimensions")));

    // column-major entry (r,c) of the reshaped block, honoring transposition
    auto entryA = [&](const Batched& m, int r, int c, int j, int k) {
        const int idx = sa.transposed ? (c + sa.rows * r) : (r + sa.rows * c);
        return m.bc(idx, j, k);
    };
    auto entryB = [&](const Batched& m, int r, int c, int j, int k) {
        const int idx = sb.transposed ? (c + sb.rows * r) : (r + sb.rows * c);
        return m.bc(idx, j, k);
    };

    Batched out(ra * cb, ne, nn);
    for (int k = 0; k < nn; ++k)
        for (int j = 0; j < ne; ++j)
            for (int c = 0; c < cb; ++c)
                for (int r = 0; r < ra; ++r) {
                    double s = 0.0;
                    for (int m = 0; m < ca; ++m)
                        s += entryA(a, r, m, j, k) * entryB(b, m, c, j, k);
                    out(r + ra * c, j, k) = s;
                }
    return out;
}

Batched vectorProduct(const Batched& a, const Batched& b) {
    if (a.components() != b.components())
        throw ShapeError("vectorProduct: component counts differ for dot product");
    const int n = a.components();
    return vectorProduct(a, b, MatShape{n, 1, true}, MatShape{n, 1, false});
}

} // namespace afem
