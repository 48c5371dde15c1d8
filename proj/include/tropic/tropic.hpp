#pragma once

// Everything at once, for tools and quick experiments.

#include "ainfinity.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "floer.hpp"
#include "io.hpp"
#include "lifts.hpp"
#include "linalg.hpp"
#include "novikov.hpp"
#include "polyhedra.hpp"
#include "rational.hpp"
#include "realization.hpp"
#include "tropical.hpp"
