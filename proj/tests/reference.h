// Copyright 2026 The tsvf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reference implementations used as test oracles. Plain loops over
// std::vector, no Eigen, so they share no code with the library.
#ifndef TSVF_TESTS_REFERENCE_H
#define TSVF_TESTS_REFERENCE_H

#include <cmath>
#include <complex>
#include <vector>

#include "tsvf/linalg.h"

namespace tsvf::reference {

using C = std::complex<double>;
using Vec = std::vector<C>;
using Mat = std::vector<Vec>;

inline Vec vec(const StateVector &s) {
    Vec v(s.dim());
    for (size_t i = 0; i < s.dim(); ++i) {
        v[i] = s[i];
    }
    return v;
}

inline Mat mat(const LinearOperator &op) {
    Mat m(op.dim(), Vec(op.dim()));
    for (size_t r = 0; r < op.dim(); ++r) {
        for (size_t c = 0; c < op.dim(); ++c) {
            m[r][c] = op(r, c);
        }
    }
    return m;
}

inline Vec apply(const Mat &m, const Vec &v) {
    Vec out(m.size());
    for (size_t r = 0; r < m.size(); ++r) {
        for (size_t c = 0; c < v.size(); ++c) {
            out[r] += m[r][c] * v[c];
        }
    }
    return out;
}

inline Mat multiply(const Mat &a, const Mat &b) {
    size_t n = a.size();
    Mat out(n, Vec(n));
    for (size_t i = 0; i < n; ++i) {
        for (size_t k = 0; k < n; ++k) {
            for (size_t j = 0; j < n; ++j) {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return out;
}

// <a|b>, conjugating a.
inline C braket(const Vec &a, const Vec &b) {
    C s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

inline Mat kron(const Mat &a, const Mat &b) {
    size_t n = a.size(), m = b.size();
    Mat out(n * m, Vec(n * m));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            for (size_t k = 0; k < m; ++k) {
                for (size_t l = 0; l < m; ++l) {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    return out;
}

inline Vec kron(const Vec &a, const Vec &b) {
    Vec out(a.size() * b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t k = 0; k < b.size(); ++k) {
            out[i * b.size() + k] = a[i] * b[k];
        }
    }
    return out;
}

inline std::vector<double> born(const Vec &psi, const std::vector<Mat> &projectors) {
    std::vector<double> p;
    for (const auto &pr : projectors) {
        p.push_back(std::real(braket(psi, apply(pr, psi))));
    }
    return p;
}

inline std::vector<double> abl(const Vec &pre, const Vec &post, const std::vector<Mat> &projectors) {
    std::vector<double> w;
    double total = 0;
    for (const auto &pr : projectors) {
        w.push_back(std::norm(braket(post, apply(pr, pre))));
        total += w.back();
    }
    for (auto &x : w) {
        x /= total;
    }
    return w;
}

inline C weak(const Vec &pre, const Vec &post, const Mat &a) {
    return braket(post, apply(a, pre)) / braket(post, pre);
}

inline std::vector<Mat> projectors(const SpectralObservable &obs) {
    std::vector<Mat> out;
    for (const auto &b : obs.branches()) {
        out.push_back(mat(b.projector));
    }
    return out;
}

// Exact post-selected pointer mean for a von Neumann coupling to sigma_z with
// a Gaussian pointer of width sigma: both branches are translated Gaussians
// and their overlap is exp(-lambda^2 / (2 sigma^2)).
inline double sigma_z_pointer_shift(const Vec &pre, const Vec &post, double lambda, double sigma) {
    C alpha = std::conj(post[0]) * pre[0];
    C beta = std::conj(post[1]) * pre[1];
    double overlap = std::exp(-lambda * lambda / (2 * sigma * sigma));
    double num = lambda * (std::norm(alpha) - std::norm(beta));
    double den = std::norm(alpha) + std::norm(beta) + 2 * std::real(std::conj(alpha) * beta) * overlap;
    return num / den;
}

}  // namespace tsvf::reference

#endif
