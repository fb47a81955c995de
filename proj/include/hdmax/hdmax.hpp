#pragma once

#include "error.hpp"
#include "experiments/table1.hpp"
#include "io/csv.hpp"
#include "io/json.hpp"
#include "leadlag/bootstrap.hpp"
#include "leadlag/contrast.hpp"
#include "leadlag/diagnostics.hpp"
#include "leadlag/partition.hpp"
#include "leadlag/test.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "piecewise.hpp"
#include "qform/monte_carlo.hpp"
#include "qform/quadratic_form.hpp"
#include "random.hpp"
#include "spotvol/band.hpp"
#include "spotvol/kernel.hpp"
#include "stats/empirical.hpp"
#include "stochastics/gaussian_max.hpp"
#include "stochastics/model.hpp"
#include "stochastics/time_lattice.hpp"
