#pragma once

#include "rod/detector.hpp"
#include "rod/error.hpp"
#include "rod/experiments.hpp"
#include "rod/io.hpp"
#include "rod/random.hpp"
#include "rod/roc.hpp"
#include "rod/sampler.hpp"
#include "rod/sde.hpp"
#include "rod/series.hpp"
#include "rod/stats.hpp"
#include "rod/validation.hpp"
