#pragma once

#include "krauskit/density.hpp"
#include "krauskit/dilation.hpp"
#include "krauskit/error.hpp"
#include "krauskit/geometric_phase.hpp"
#include "krauskit/kraus.hpp"
#include "krauskit/linalg.hpp"
#include "krauskit/matrix.hpp"
#include "krauskit/trajectory.hpp"
