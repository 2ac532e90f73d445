// Copyright 2026 The qfmap Authors
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

// Convenience header pulling in the whole library.

#pragma once

#include "qfm/benchmark.hpp"
#include "qfm/circuit_io.hpp"
#include "qfm/data.hpp"
#include "qfm/dfo.hpp"
#include "qfm/errors.hpp"
#include "qfm/feature_map.hpp"
#include "qfm/gasearch.hpp"
#include "qfm/kernels.hpp"
#include "qfm/linalg.hpp"
#include "qfm/log.hpp"
#include "qfm/parallel.hpp"
#include "qfm/pipeline.hpp"
#include "qfm/qcore.hpp"
#include "qfm/random.hpp"
#include "qfm/simplify.hpp"
#include "qfm/svm.hpp"
#include "qfm/udecomp.hpp"
#include "qfm/vqc.hpp"
