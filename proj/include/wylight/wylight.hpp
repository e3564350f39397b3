#pragma once

#include "wylight/analysis.hpp"
#include "wylight/baselines.hpp"
#include "wylight/engine.hpp"
#include "wylight/errors.hpp"
#include "wylight/exact_test.hpp"
#include "wylight/miner.hpp"
#include "wylight/numeric.hpp"
#include "wylight/permutation.hpp"
#include "wylight/testability.hpp"
