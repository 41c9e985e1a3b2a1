//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "sabatier/common.hpp"
#include "sabatier/species.hpp"
#include "sabatier/thermo.hpp"
#include "sabatier/transport.hpp"
#include "sabatier/kinetics.hpp"
#include "sabatier/banded.hpp"
#include "sabatier/reactor_config.hpp"
#include "sabatier/wall_temperature.hpp"
#include "sabatier/reactor.hpp"
#include "sabatier/newton.hpp"
#include "sabatier/diagnostics.hpp"
#include "sabatier/adjoint.hpp"
#include "sabatier/lbfgs.hpp"
#include "sabatier/problems.hpp"
