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

#ifndef TSVF_INSTANCES_H
#define TSVF_INSTANCES_H

#include "tsvf/linalg.h"
#include "tsvf/rng.h"

namespace tsvf {

// Random instances for randomized checks.

/// Haar-random unit vector.
StateVector random_state(size_t dim, RandomStream &rng);

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
Unitary random_unitary(size_t dim, RandomStream &rng);

/// Observable with a Haar-random eigenbasis and eigenvalues drawn from
/// {-3, ..., 3}. With allow_degenerate, neighbouring basis vectors may share
/// an eigenvalue so some branches have rank > 1.
SpectralObservable random_observable(size_t dim, RandomStream &rng, bool allow_degenerate = false);

}  // namespace tsvf

#endif
