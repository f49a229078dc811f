// twomode.hpp: Umbrella header for the numerical library (the CLI layer lives in twomode/cli.hpp).

#pragma once

#include "twomode/fock.hpp"
#include "twomode/dynamics.hpp"
#include "twomode/entanglement.hpp"
#include "twomode/sweeps.hpp"
#include "twomode/rational.hpp"
#include "twomode/gatekit.hpp"
