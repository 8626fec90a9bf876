// Copyright 2026 The essp authors
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

#ifndef ESSP_ESSP_HPP_
#define ESSP_ESSP_HPP_

#include "essp/backend.hpp"
#include "essp/costs.hpp"
#include "essp/csv.hpp"
#include "essp/datagen.hpp"
#include "essp/estimation.hpp"
#include "essp/json_io.hpp"
#include "essp/methods/baselines.hpp"
#include "essp/methods/common.hpp"
#include "essp/methods/flp.hpp"
#include "essp/methods/opt.hpp"
#include "essp/milp/branch_and_bound.hpp"
#include "essp/milp/lp_format.hpp"
#include "essp/milp/model.hpp"
#include "essp/milp/simplex.hpp"
#include "essp/model.hpp"
#include "essp/rng.hpp"

#endif  // ESSP_ESSP_HPP_
