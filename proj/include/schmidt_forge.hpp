#pragma once

#include "schmidt_forge/efficiency.hpp"
#include "schmidt_forge/error.hpp"
#include "schmidt_forge/fixedprob.hpp"
#include "schmidt_forge/interp.hpp"
#include "schmidt_forge/io.hpp"
#include "schmidt_forge/oracle.hpp"
#include "schmidt_forge/parallel.hpp"
#include "schmidt_forge/sampling.hpp"
#include "schmidt_forge/spectrum.hpp"
#include "schmidt_forge/sweep.hpp"
#include "schmidt_forge/validation.hpp"
