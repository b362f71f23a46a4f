// Copyright 2026 The OIL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OIL_OIL_HPP
#define OIL_OIL_HPP

#include "oil/alphabet.hpp"
#include "oil/bench.hpp"
#include "oil/distribution.hpp"
#include "oil/engine.hpp"
#include "oil/errors.hpp"
#include "oil/info.hpp"
#include "oil/json_io.hpp"
#include "oil/kernel.hpp"
#include "oil/oracle.hpp"
#include "oil/rng.hpp"
#include "oil/special.hpp"
#include "oil/svg.hpp"

#endif  // OIL_OIL_HPP
