#pragma once

// Umbrella header for the engine (everything except the command-line layer).

#include "lossqfi/channel.hpp"
#include "lossqfi/degauss.hpp"
#include "lossqfi/errors.hpp"
#include "lossqfi/estimation.hpp"
#include "lossqfi/fock_core.hpp"
#include "lossqfi/format.hpp"
#include "lossqfi/montecarlo.hpp"
#include "lossqfi/optimizer.hpp"
#include "lossqfi/probes.hpp"
#include "lossqfi/simplex.hpp"
#include "lossqfi/subtraction.hpp"
