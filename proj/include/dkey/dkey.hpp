// Copyright 2026 The dkey Authors.
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

#ifndef DKEY_DKEY_HPP
#define DKEY_DKEY_HPP

#include "dkey/adversary.hpp"
#include "dkey/algebra.hpp"
#include "dkey/config.hpp"
#include "dkey/entropy.hpp"
#include "dkey/equations.hpp"
#include "dkey/level1.hpp"
#include "dkey/level2.hpp"
#include "dkey/permutation.hpp"
#include "dkey/transcript.hpp"

#endif  // DKEY_DKEY_HPP
