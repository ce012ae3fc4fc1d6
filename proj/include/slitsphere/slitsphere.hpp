#pragma once

#include "slitsphere/core.hpp"
#include "slitsphere/geometry.hpp"
#include "slitsphere/quadrature.hpp"
#include "slitsphere/mesh.hpp"
#include "slitsphere/singular.hpp"
#include "slitsphere/fem.hpp"
#include "slitsphere/eigensolve.hpp"
#include "slitsphere/extraction.hpp"
#include "slitsphere/sweep.hpp"
#include "slitsphere/svg.hpp"
