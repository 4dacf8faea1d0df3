#pragma once

#include "admflow/admissible.hpp"
#include "admflow/config.hpp"
#include "admflow/errors.hpp"
#include "admflow/exp_integral.hpp"
#include "admflow/flow.hpp"
#include "admflow/gqe.hpp"
#include "admflow/io.hpp"
#include "admflow/polynomial.hpp"
#include "admflow/potential.hpp"
#include "admflow/rational.hpp"
#include "admflow/roots.hpp"
#include "admflow/stability.hpp"
