#pragma once

#include "qpoisson/errors.hpp"
#include "qpoisson/poisson.hpp"
#include "qpoisson/state.hpp"
#include "qpoisson/gates.hpp"
#include "qpoisson/simulator.hpp"
#include "qpoisson/metrics.hpp"
#include "qpoisson/hhl.hpp"
#include "qpoisson/cost.hpp"
#include "qpoisson/noise.hpp"
#include "qpoisson/scaling.hpp"
