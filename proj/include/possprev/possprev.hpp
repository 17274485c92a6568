#pragma once

// Umbrella header.

#include "possprev/error.hpp"
#include "possprev/scalar_function.hpp"
#include "possprev/quadrature.hpp"
#include "possprev/weighting.hpp"
#include "possprev/fuzzy_number.hpp"
#include "possprev/possibilistic.hpp"
#include "possprev/random_variable.hpp"
#include "possprev/preferences.hpp"
#include "possprev/scenario.hpp"
#include "possprev/models.hpp"
#include "possprev/comparison.hpp"
#include "possprev/oracle.hpp"
#include "possprev/generator.hpp"
#include "possprev/scenario_io.hpp"
#include "possprev/parallel.hpp"
#include "possprev/checks.hpp"
