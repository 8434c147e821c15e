#pragma once

// Umbrella header.

#include "choquet/capacity.hpp"
#include "choquet/errors.hpp"
#include "choquet/ground.hpp"
#include "choquet/integral.hpp"
#include "choquet/io.hpp"
#include "choquet/jacobi.hpp"
#include "choquet/operators.hpp"
#include "choquet/ordered_value.hpp"
#include "choquet/report.hpp"
#include "choquet/rng.hpp"
