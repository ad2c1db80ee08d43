// Copyright 2026 The snnv Authors
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

#pragma once

#include "snnv/bench.hpp"
#include "snnv/bigint.hpp"
#include "snnv/dcs.hpp"
#include "snnv/errors.hpp"
#include "snnv/hash.hpp"
#include "snnv/io/idx.hpp"
#include "snnv/io/model_file.hpp"
#include "snnv/io/report.hpp"
#include "snnv/perturbation.hpp"
#include "snnv/random.hpp"
#include "snnv/smt/constraints.hpp"
#include "snnv/smt/expr.hpp"
#include "snnv/smt/process.hpp"
#include "snnv/smt/solver.hpp"
#include "snnv/snn.hpp"
#include "snnv/trace_check.hpp"
#include "snnv/verdict.hpp"
