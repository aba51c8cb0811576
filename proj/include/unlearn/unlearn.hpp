#pragma once

// Umbrella header for the distributional-unlearning toolkit.

#include "unlearn/concentration.hpp"
#include "unlearn/linalg.hpp"
#include "unlearn/montecarlo.hpp"
#include "unlearn/noise.hpp"
#include "unlearn/regions.hpp"
#include "unlearn/removal.hpp"
#include "unlearn/rng.hpp"
#include "unlearn/special_functions.hpp"
#include "unlearn/tradeoff.hpp"
