#pragma once

#include "quantities.hpp"
#include "errors.hpp"
#include "structure.hpp"
#include "kinematics.hpp"
#include "scattering.hpp"
#include "oracle.hpp"
#include "landauer.hpp"
#include "traversal.hpp"
#include "config.hpp"
#include "sweep.hpp"
