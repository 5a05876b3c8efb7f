// Copyright 2026 The Regraph Authors
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

#include "regraph/cli.hpp"
#include "regraph/errors.hpp"
#include "regraph/evaluate.hpp"
#include "regraph/graph.hpp"
#include "regraph/graph_json.hpp"
#include "regraph/joern.hpp"
#include "regraph/linalg.hpp"
#include "regraph/matcher.hpp"
#include "regraph/model.hpp"
#include "regraph/pipeline.hpp"
#include "regraph/rng.hpp"
#include "regraph/synth.hpp"
#include "regraph/train.hpp"
#include "regraph/vectorizer.hpp"
#include "regraph/xlsx.hpp"
