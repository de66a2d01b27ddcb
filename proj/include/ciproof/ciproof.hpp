// Copyright 2026 The ciproof Authors
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

#pragma once

#include "ciproof/closure.hpp"
#include "ciproof/derivation.hpp"
#include "ciproof/dsep.hpp"
#include "ciproof/element_set.hpp"
#include "ciproof/error.hpp"
#include "ciproof/join_tree.hpp"
#include "ciproof/model.hpp"
#include "ciproof/mug.hpp"
#include "ciproof/prob_oracle.hpp"
#include "ciproof/script_io.hpp"
#include "ciproof/statement.hpp"
#include "ciproof/ugraph.hpp"
