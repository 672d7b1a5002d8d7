/*
 * Copyright 2026 The rankdesign Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RANKDESIGN_RANKDESIGN_HPP_
#define RANKDESIGN_RANKDESIGN_HPP_

#include "rankdesign/design.hpp"
#include "rankdesign/equilibrium.hpp"
#include "rankdesign/errors.hpp"
#include "rankdesign/function_spec.hpp"
#include "rankdesign/golden_section.hpp"
#include "rankdesign/groups.hpp"
#include "rankdesign/multidim.hpp"
#include "rankdesign/oracle.hpp"
#include "rankdesign/parallel.hpp"
#include "rankdesign/policy.hpp"
#include "rankdesign/quadrature.hpp"
#include "rankdesign/welfare.hpp"

#endif  // RANKDESIGN_RANKDESIGN_HPP_
