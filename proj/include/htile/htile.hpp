#pragma once

#include "htile/constructions.hpp"
#include "htile/error.hpp"
#include "htile/fractional.hpp"
#include "htile/graph.hpp"
#include "htile/graph_io.hpp"
#include "htile/harness.hpp"
#include "htile/params.hpp"
#include "htile/patterns.hpp"
#include "htile/rational.hpp"
#include "htile/serialize.hpp"
#include "htile/simplex.hpp"
#include "htile/tiling.hpp"
