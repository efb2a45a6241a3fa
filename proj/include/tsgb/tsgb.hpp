// Copyright 2026 The TSGB Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "tsgb/baselines.hpp"
#include "tsgb/booster.hpp"
#include "tsgb/common.hpp"
#include "tsgb/config.hpp"
#include "tsgb/data_split.hpp"
#include "tsgb/dataset.hpp"
#include "tsgb/diagnostics.hpp"
#include "tsgb/export.hpp"
#include "tsgb/gain.hpp"
#include "tsgb/grow.hpp"
#include "tsgb/io.hpp"
#include "tsgb/metrics.hpp"
#include "tsgb/model_io.hpp"
#include "tsgb/objective.hpp"
#include "tsgb/random.hpp"
#include "tsgb/sentiment.hpp"
#include "tsgb/split_finder.hpp"
#include "tsgb/synthgen.hpp"
#include "tsgb/task_set.hpp"
#include "tsgb/tree.hpp"
