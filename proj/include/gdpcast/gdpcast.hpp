#pragma once

// Umbrella header: the whole library in one include.

#include "gdpcast/cli.hpp"
#include "gdpcast/csv.hpp"
#include "gdpcast/dlm.hpp"
#include "gdpcast/errors.hpp"
#include "gdpcast/fetch.hpp"
#include "gdpcast/gdp.hpp"
#include "gdpcast/holt_winters.hpp"
#include "gdpcast/math.hpp"
#include "gdpcast/metrics.hpp"
#include "gdpcast/nelder_mead.hpp"
#include "gdpcast/rng.hpp"
#include "gdpcast/sarima.hpp"
#include "gdpcast/stats.hpp"
#include "gdpcast/svg.hpp"
#include "gdpcast/time_series.hpp"
#include "gdpcast/transforms.hpp"
