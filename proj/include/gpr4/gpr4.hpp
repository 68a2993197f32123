#pragma once

#include "gpr4/cases.hpp"
#include "gpr4/compatible.hpp"
#include "gpr4/convective.hpp"
#include "gpr4/driver.hpp"
#include "gpr4/errors.hpp"
#include "gpr4/gjv.hpp"
#include "gpr4/grid.hpp"
#include "gpr4/heat.hpp"
#include "gpr4/io.hpp"
#include "gpr4/krylov.hpp"
#include "gpr4/model.hpp"
#include "gpr4/operators.hpp"
#include "gpr4/pressure.hpp"
#include "gpr4/reference.hpp"
#include "gpr4/run.hpp"
#include "gpr4/state.hpp"
#include "gpr4/tensor.hpp"
