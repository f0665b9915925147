// SPDX-License-Identifier: Apache-2.0
//
// pixelmimo - capacity toolkit for MIMO links with switch-reconfigurable
// pixel antennas
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "antenna_model.hpp"
#include "channel.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "instance.hpp"
#include "json_io.hpp"
#include "random.hpp"
#include "solvers/ao.hpp"
#include "solvers/baselines.hpp"
#include "solvers/bnb.hpp"
#include "solvers/dispatch.hpp"
#include "solvers/diving.hpp"
#include "solvers/exhaustive.hpp"
#include "solvers/sebo.hpp"
#include "solvers/solution.hpp"
