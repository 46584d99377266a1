#pragma once

#include "analysis.hpp"
#include "fading.hpp"
#include "metrics.hpp"
#include "montecarlo.hpp"
#include "numerics.hpp"
#include "random.hpp"
#include "selection.hpp"
#include "usercount.hpp"
