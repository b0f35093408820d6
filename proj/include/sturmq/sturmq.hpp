#pragma once

#include "sturmq/errors.hpp"
#include "sturmq/potential.hpp"
#include "sturmq/random.hpp"
#include "sturmq/operator.hpp"
#include "sturmq/eigensolver.hpp"
#include "sturmq/discretization.hpp"
#include "sturmq/state.hpp"
#include "sturmq/unitary.hpp"
#include "sturmq/schedule.hpp"
#include "sturmq/measurement.hpp"
#include "sturmq/phase_estimation.hpp"
#include "sturmq/frequency_sets.hpp"
#include "sturmq/symbolic.hpp"
#include "sturmq/trig_fit.hpp"
#include "sturmq/lower_bound.hpp"
#include "sturmq/report.hpp"
