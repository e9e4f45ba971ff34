#pragma once

// Umbrella header.

#include "apfree/bigint.hpp"
#include "apfree/constructions.hpp"
#include "apfree/errors.hpp"
#include "apfree/greedy.hpp"
#include "apfree/integer_set.hpp"
#include "apfree/measure.hpp"
#include "apfree/progressions.hpp"
#include "apfree/rational.hpp"
#include "apfree/search.hpp"
#include "apfree/sequence_io.hpp"
#include "apfree/topology.hpp"
