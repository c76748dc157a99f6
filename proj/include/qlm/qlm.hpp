#pragma once

// Umbrella header for the quantum learning machine library.

#include "qlm/config.hpp"
#include "qlm/csv.hpp"
#include "qlm/deutsch.hpp"
#include "qlm/errors.hpp"
#include "qlm/experiment.hpp"
#include "qlm/learning.hpp"
#include "qlm/linalg.hpp"
#include "qlm/rng.hpp"
#include "qlm/su.hpp"
