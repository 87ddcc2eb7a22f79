#pragma once

#include <cassert>
#include <vector>

namespace nlns {

using Vec = std::vector<double>;

// Dense row-major matrix. Just enough linear algebra for the repair model;
// everything stays in double so gradient checks hold to tight tolerances.
struct Mat {
    int rows = 0;
    int cols = 0;
    Vec a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
    const double* row(int r) const { return a.data() + static_cast<size_t>(r) * cols; }
    void zero() { std::fill(a.begin(), a.end(), 0.0); }
};

// y (+)= M * x, using the column block [c0, c0+xn) of M
inline void matvec_block(const Mat& m, int c0, int xn, const double* x, double* y, bool accumulate) {
    assert(c0 + xn <= m.cols);
    for (int r = 0; r < m.rows; ++r) {
        const double* row = m.row(r) + c0;
        double s = accumulate ? y[r] : 0.0;
        for (int c = 0; c < xn; ++c) s += row[c] * x[c];
        y[r] = s;
    }
}

inline void matvec(const Mat& m, const double* x, double* y) { matvec_block(m, 0, m.cols, x, y, false); }

// x += Mᵀ y restricted to the column block [c0, c0+xn)
inline void tmatvec_block_add(const Mat& m, int c0, int xn, const double* y, double* x) {
    for (int r = 0; r < m.rows; ++r) {
        const double* row = m.row(r) + c0;
        double yr = y[r];
        if (yr == 0.0) continue;
        for (int c = 0; c < xn; ++c) x[c] += row[c] * yr;
    }
}

// G += y xᵀ restricted to the column block [c0, c0+xn)
inline void outer_block_add(Mat& g, int c0, int xn, const double* y, const double* x) {
    for (int r = 0; r < g.rows; ++r) {
        double yr = y[r];
        if (yr == 0.0) continue;
        double* row = g.a.data() + static_cast<size_t>(r) * g.cols + c0;
        for (int c = 0; c < xn; ++c) row[c] += yr * x[c];
    }
}

inline void add_scaled(Vec& dst, const Vec& src, double s) {
    assert(dst.size() == src.size());
    for (size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
}

inline double dot(const double* a, const double* b, int n) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace nlns
