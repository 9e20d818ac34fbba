// Umbrella header.
#pragma once

#include "cellsort/algorithms.hpp"
#include "cellsort/config.hpp"
#include "cellsort/core.hpp"
#include "cellsort/engine.hpp"
#include "cellsort/experiments.hpp"
#include "cellsort/metrics.hpp"
#include "cellsort/outcome.hpp"
#include "cellsort/probe.hpp"
#include "cellsort/rng.hpp"
#include "cellsort/run_context.hpp"
#include "cellsort/stats.hpp"
#include "cellsort/report.hpp"
