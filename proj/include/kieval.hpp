// Copyright 2026 The kieval Authors
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
//

#ifndef KIEVAL_KIEVAL_HPP_
#define KIEVAL_KIEVAL_HPP_

#include "kieval/choice_prompt.hpp"
#include "kieval/config.hpp"
#include "kieval/contamination.hpp"
#include "kieval/converters.hpp"
#include "kieval/core.hpp"
#include "kieval/cost.hpp"
#include "kieval/csv.hpp"
#include "kieval/dataset.hpp"
#include "kieval/error.hpp"
#include "kieval/gateway.hpp"
#include "kieval/http_backend.hpp"
#include "kieval/orchestrator.hpp"
#include "kieval/parallel.hpp"
#include "kieval/prompts.hpp"
#include "kieval/random.hpp"
#include "kieval/report.hpp"
#include "kieval/scoring.hpp"
#include "kieval/static_bench.hpp"
#include "kieval/stats.hpp"
#include "kieval/verification.hpp"

#endif  // KIEVAL_KIEVAL_HPP_
