#pragma once

#include "scrubrel/commands.hpp"
#include "scrubrel/config.hpp"
#include "scrubrel/markov.hpp"
#include "scrubrel/models.hpp"
#include "scrubrel/montecarlo.hpp"
#include "scrubrel/numerics.hpp"
#include "scrubrel/output.hpp"
#include "scrubrel/rng.hpp"
#include "scrubrel/tables.hpp"
