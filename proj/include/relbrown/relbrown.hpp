#pragma once

#include "relbrown/config.hpp"
#include "relbrown/continuation.hpp"
#include "relbrown/ensemble.hpp"
#include "relbrown/fokker_planck.hpp"
#include "relbrown/minkowski.hpp"
#include "relbrown/oracle.hpp"
#include "relbrown/process.hpp"
#include "relbrown/rng.hpp"
#include "relbrown/sampler.hpp"
#include "relbrown/stats.hpp"
#include "relbrown/validation.hpp"
