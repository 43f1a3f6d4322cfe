#pragma once

#include "teich/error.hpp"
#include "teich/tolerance.hpp"
#include "teich/mobius.hpp"
#include "teich/box.hpp"
#include "teich/sampler.hpp"
#include "teich/currents.hpp"
#include "teich/boundary_map.hpp"
#include "teich/earthquake.hpp"
