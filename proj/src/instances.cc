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

#include "tsvf/instances.h"

#include <algorithm>
#include <numeric>
#include <random>

namespace tsvf {

namespace {

Matrix ginibre(size_t rows, size_t cols, RandomStream &rng) {
    std::normal_distribution<double> normal;
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            double re = normal(rng);
            double im = normal(rng);
            m(r, c) = Complex(re, im);
        }
    }
    return m;
}

}  // namespace

StateVector random_state(size_t dim, RandomStream &rng) {
    return StateVector::normalize(ginibre(dim, 1, rng).col(0));
}

Unitary random_unitary(size_t dim, RandomStream &rng) {
    Eigen::HouseholderQR<Matrix> qr(ginibre(dim, dim, rng));
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        Complex d = r(k, k);
        q.col(k) *= std::abs(d) == 0 ? Complex(1) : d / std::abs(d);
    }
    return Unitary(q);
}

SpectralObservable random_observable(size_t dim, RandomStream &rng, bool allow_degenerate) {
    Matrix basis = random_unitary(dim, rng).matrix();
    // Distinct eigenvalues from {-3..3}, then optionally merge neighbours.
    std::vector<int> pool{-3, -2, -1, 0, 1, 2, 3};
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int> values(pool.begin(), pool.begin() + static_cast<long>(std::min(dim, pool.size())));
    while (values.size() < dim) {
        values.push_back(values.back() + 7);
    }
    if (allow_degenerate && dim > 2) {
        for (size_t k = 1; k < dim; ++k) {
            if (rng.uniform() < 0.3) {
                values[k] = values[k - 1];
            }
        }
    }
    std::vector<SpectralBranch> branches;
    std::vector<bool> used(dim, false);
    for (size_t k = 0; k < dim; ++k) {
        if (used[k]) {
            continue;
        }
        Matrix p = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (size_t j = k; j < dim; ++j) {
            if (values[j] == values[k]) {
                used[j] = true;
                auto v = basis.col(static_cast<Eigen::Index>(j));
                p += v * v.adjoint();
            }
        }
        branches.push_back({static_cast<double>(values[k]), LinearOperator(std::move(p))});
    }
    return SpectralObservable(std::move(branches));
}

}  // namespace tsvf
