#pragma once

#include "cragged/arith.hpp"
#include "cragged/lattice.hpp"
#include "cragged/polyhedra.hpp"
#include "cragged/stackyfan.hpp"
#include "cragged/craggedness.hpp"
#include "cragged/homtheta.hpp"
#include "cragged/fan_json.hpp"
#include "cragged/cli.hpp"
