#pragma once

#include "phaseamb/enumerate.hpp"
#include "phaseamb/errors.hpp"
#include "phaseamb/generate.hpp"
#include "phaseamb/io.hpp"
#include "phaseamb/nonneg.hpp"
#include "phaseamb/rng.hpp"
#include "phaseamb/roots.hpp"
#include "phaseamb/signal.hpp"
#include "phaseamb/tolerances.hpp"
