// Copyright 2026 The bettiq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "bettiq/chebyshev.hpp"
#include "bettiq/circuit.hpp"
#include "bettiq/common.hpp"
#include "bettiq/complex.hpp"
#include "bettiq/estimator.hpp"
#include "bettiq/operators.hpp"
#include "bettiq/oracle.hpp"
#include "bettiq/pauli.hpp"
#include "bettiq/pipeline.hpp"
#include "bettiq/point_cloud.hpp"
#include "bettiq/report.hpp"
#include "bettiq/rng.hpp"
#include "bettiq/sampling.hpp"
#include "bettiq/state_vector.hpp"
