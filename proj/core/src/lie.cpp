#include "ym/lie.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

namespace ym {

Mat3 so3Exp(const LieValue& w) {
    const double th = w.norm();
    Mat3 K;
    K.m = {0, -w[2], w[1], w[2], 0, -w[0], -w[1], w[0], 0};
    Mat3 K2 = K * K;
    double a, b;
    if (th < 1e-6) {
        a = 1.0 - th * th / 6.0;
        b = 0.5 - th * th / 24.0;
    } else {
        a = std::sin(th) / th;
        b = (1.0 - std::cos(th)) / (th * th);
    }
    return Mat3::identity() + a * K + b * K2;
}

LieValue so3Log(const Mat3& R) {
    const double tr = R.at(0, 0) + R.at(1, 1) + R.at(2, 2);
    double c = std::clamp(0.5 * (tr - 1.0), -1.0, 1.0);
    double th = std::acos(c);
    LieValue v{R.at(2, 1) - R.at(1, 2), R.at(0, 2) - R.at(2, 0), R.at(1, 0) - R.at(0, 1)};
    double s = (th < 1e-6) ? 0.5 + th * th / 12.0 : th / (2.0 * std::sin(th));
    return s * v;
}

Mat3 orthogonalize(const Mat3& R) {
    Mat3 Q = R;
    for (int it = 0; it < 3; ++it) {
        // Q <- 1/2 (Q + Q^{-T}); for near-orthogonal Q converges quadratically.
        Mat3 Qt = Q.transposed();
        // invert Qt by adjugate
        const double* m = Qt.m.data();
        double det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                     m[2] * (m[3] * m[7] - m[4] * m[6]);
        Mat3 inv;
        inv.m = {(m[4] * m[8] - m[5] * m[7]), -(m[1] * m[8] - m[2] * m[7]), (m[1] * m[5] - m[2] * m[4]),
                 -(m[3] * m[8] - m[5] * m[6]), (m[0] * m[8] - m[2] * m[6]), -(m[0] * m[5] - m[2] * m[3]),
                 (m[3] * m[7] - m[4] * m[6]), -(m[0] * m[7] - m[1] * m[6]), (m[0] * m[4] - m[1] * m[3])};
        for (double& x : inv.m) x /= det;
        Q = 0.5 * (Q + inv);
    }
    return Q;
}

void jacobiEigenSym(int k, const double* a, double* vals, double* vecs) {
    std::vector<double> A(a, a + k * k);
    std::vector<double> V(k * k, 0.0);
    for (int i = 0; i < k; ++i) V[i * k + i] = 1.0;
    auto at = [&](std::vector<double>& M, int i, int j) -> double& { return M[i * k + j]; };

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) off += A[i * k + j] * A[i * k + j];
        if (off < 1e-30) break;
        for (int p = 0; p < k; ++p) {
            for (int q = p + 1; q < k; ++q) {
                double apq = at(A, p, q);
                if (std::abs(apq) < 1e-300) continue;
                double app = at(A, p, p), aqq = at(A, q, q);
                double tau = (aqq - app) / (2.0 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
                for (int i = 0; i < k; ++i) {
                    double aip = at(A, i, p), aiq = at(A, i, q);
                    at(A, i, p) = c * aip - s * aiq;
                    at(A, i, q) = s * aip + c * aiq;
                }
                for (int j = 0; j < k; ++j) {
                    double apj = at(A, p, j), aqj = at(A, q, j);
                    at(A, p, j) = c * apj - s * aqj;
                    at(A, q, j) = s * apj + c * aqj;
                }
                for (int i = 0; i < k; ++i) {
                    double vip = at(V, i, p), viq = at(V, i, q);
                    at(V, i, p) = c * vip - s * viq;
                    at(V, i, q) = s * vip + c * viq;
                }
            }
        }
    }
    // sort eigenpairs ascending, stable
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int i, int j) { return A[i * k + i] < A[j * k + j]; });
    for (int c = 0; c < k; ++c) {
        vals[c] = A[idx[c] * k + idx[c]];
        for (int r = 0; r < k; ++r) vecs[r * k + c] = V[r * k + idx[c]];
    }
}

} // namespace ym
