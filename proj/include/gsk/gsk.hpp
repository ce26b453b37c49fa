#pragma once
// Umbrella header for the library.

#include "gsk/aggregates.hpp"
#include "gsk/char_sums.hpp"
#include "gsk/fourier_poisson.hpp"
#include "gsk/large_sieve.hpp"
#include "gsk/report.hpp"
#include "gsk/smooth_weights.hpp"
#include "gsk/spectral_transform.hpp"
#include "gsk/suites.hpp"
#include "gsk/zi_core.hpp"
