#pragma once

#include "core.hpp"
#include "experiment.hpp"
#include "io.hpp"
#include "linop.hpp"
#include "measurement.hpp"
#include "model_approx.hpp"
#include "recovery.hpp"
#include "rng.hpp"
#include "sampling.hpp"
#include "signal_model.hpp"
#include "simplex.hpp"
