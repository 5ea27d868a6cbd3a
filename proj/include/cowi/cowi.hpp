#pragma once
// Umbrella header.

#include "cowi/arm_set.hpp"
#include "cowi/bounds.hpp"
#include "cowi/envgen.hpp"
#include "cowi/experiment.hpp"
#include "cowi/instance.hpp"
#include "cowi/io.hpp"
#include "cowi/ppr.hpp"
#include "cowi/rng.hpp"
#include "cowi/solvers.hpp"
#include "cowi/special.hpp"
