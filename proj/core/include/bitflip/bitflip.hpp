#pragma once

#include "bitflip/cell.hpp"
#include "bitflip/config.hpp"
#include "bitflip/constants.hpp"
#include "bitflip/drift.hpp"
#include "bitflip/errors.hpp"
#include "bitflip/estimators.hpp"
#include "bitflip/io.hpp"
#include "bitflip/projection.hpp"
#include "bitflip/rng.hpp"
#include "bitflip/sde.hpp"
#include "bitflip/sweep.hpp"
