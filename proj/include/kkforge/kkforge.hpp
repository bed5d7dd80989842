// Copyright 2026 The kk-forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Everything except the HTTP service (kkforge/service.hpp), which pulls in
// cpp-httplib.

#pragma once

#include "kkforge/dataset.hpp"
#include "kkforge/eval.hpp"
#include "kkforge/generator.hpp"
#include "kkforge/grader.hpp"
#include "kkforge/logic.hpp"
#include "kkforge/numeric.hpp"
#include "kkforge/rng.hpp"
#include "kkforge/serialize.hpp"
#include "kkforge/solver.hpp"
#include "kkforge/version.hpp"
