// Copyright 2026 The spircap authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "spir/capacity.hpp"
#include "spir/error.hpp"
#include "spir/exact_lp.hpp"
#include "spir/finite_field.hpp"
#include "spir/grs_code.hpp"
#include "spir/pattern.hpp"
#include "spir/protocol.hpp"
#include "spir/rational.hpp"
#include "spir/verifier.hpp"
