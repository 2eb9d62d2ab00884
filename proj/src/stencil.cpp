#include "mirrorflow/stencil.hpp"

#include <cmath>

namespace mirrorflow {

std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m) {
    // B. Fornberg, "Generation of finite difference formulas on arbitrarily
    // spaced grids", Math. Comp. 51 (1988).
    const int nd = static_cast<int>(nodes.size()) - 1;
    if (nd < m) throw ResolutionError("fd_weights: need more nodes than derivative order");
    std::vector<std::vector<double>> c(nodes.size(), std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i <= nd; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = c[i][m];
    return w;
}

TraceStencil one_sided_stencil(double dx, int m, int q, TraceSide side, bool include_plane) {
    if (m < 0 || q < 1) throw ResolutionError("one_sided_stencil: invalid orders");
    const int npts = m + q;
    const int sign = side == TraceSide::Above ? 1 : -1;
    TraceStencil st;
    std::vector<double> nodes;
    for (int s = 0; s < npts; ++s) {
        const int off = sign * (include_plane ? s : s + 1);
        st.offsets.push_back(off);
        nodes.push_back(off * dx);
    }
    st.weights = fd_weights(0.0, nodes, m);
    return st;
}

std::vector<double> normal_derivative_plane(const VectorField& f, int c, int plane,
                                            const TraceStencil& st) {
    const GridSpec& g = f.grid();
    const int n1 = g.n1(), n2 = g.n2(), n3 = g.n3();
    std::vector<int> planes(st.offsets.size());
    for (std::size_t s = 0; s < st.offsets.size(); ++s) {
        int k = plane + st.offsets[s];
        if (g.periodic_x3()) {
            k = ((k % n3) + n3) % n3;
        } else if (k < 0 || k >= n3) {
            throw ResolutionError("stencil needs " + std::to_string(st.offsets.size()) +
                                  " planes beyond plane " + std::to_string(plane));
        }
        planes[s] = k;
    }
    std::vector<double> out(static_cast<std::size_t>(n1) * n2, 0.0);
    const auto& data = f.component(c);
    for (std::size_t s = 0; s < planes.size(); ++s) {
        const double w = st.weights[s];
        const double* slice = data.data() + g.idx(0, 0, planes[s]);
        for (std::size_t p = 0; p < out.size(); ++p) out[p] += w * slice[p];
    }
    return out;
}

std::vector<double> normal_derivative_field(const VectorField& f, int comp, int m, int q) {
    const GridSpec& g = f.grid();
    const int n3 = g.n3();
    const double d = g.dx(2);
    const std::size_t plane_sz = static_cast<std::size_t>(g.n1()) * g.n2();
    const auto& data = f.component(comp);
    std::vector<double> out(data.size(), 0.0);
    const int reach = (m + q) / 2 + 1;
    for (int k = 0; k < n3; ++k) {
        int lo = k - reach, hi = k + reach;
        if (!g.periodic_x3()) {
            lo = std::max(lo, 0);
            hi = std::min(hi, n3 - 1);
            if (hi - lo + 1 < m + q) { // widen one-sided near the ends
                lo = std::max(0, std::min(lo, n3 - (m + q)));
                hi = std::min(n3 - 1, lo + (m + q) - 1);
            }
            if (hi - lo + 1 < m + q)
                throw ResolutionError("normal_derivative_field: not enough planes");
        }
        std::vector<double> nodes;
        for (int s = lo; s <= hi; ++s) nodes.push_back((s - k) * d);
        const auto w = fd_weights(0.0, nodes, m);
        double* op = out.data() + g.idx(0, 0, k);
        for (int s = lo; s <= hi; ++s) {
            const int src = g.periodic_x3() ? ((s % n3) + n3) % n3 : s;
            const double* ip = data.data() + g.idx(0, 0, src);
            const double ws = w[s - lo];
            for (std::size_t p = 0; p < plane_sz; ++p) op[p] += ws * ip[p];
        }
    }
    return out;
}

double stencil_series_coefficient(const TraceStencil& st, double dx, int m, int p) {
    double sum = 0.0;
    for (std::size_t s = 0; s < st.offsets.size(); ++s)
        sum += st.weights[s] * std::pow(st.offsets[s], p) * std::pow(dx, m);
    double fact = 1.0;
    for (int i = 2; i <= p; ++i) fact *= i;
    return std::abs(sum) / fact;
}

} // namespace mirrorflow
