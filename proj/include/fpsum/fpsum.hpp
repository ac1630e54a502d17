#pragma once

// Umbrella header: normal and Edgeworth approximation, Berry-Esseen rate
// diagnostics and Cramer-type tail ratios for the sum of a simple random
// sample drawn without replacement from a finite population of independent
// lattice-valued (possibly degenerate) random elements.

#include "fpsum/charfn.hpp"
#include "fpsum/deviations.hpp"
#include "fpsum/diagnostics.hpp"
#include "fpsum/errors.hpp"
#include "fpsum/expansion.hpp"
#include "fpsum/moments.hpp"
#include "fpsum/oracle.hpp"
#include "fpsum/poly.hpp"
#include "fpsum/population.hpp"
#include "fpsum/quadrature.hpp"
#include "fpsum/rational.hpp"
#include "fpsum/rng.hpp"
#include "fpsum/special.hpp"
#include "fpsum/version.hpp"
