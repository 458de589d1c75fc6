#pragma once

#include "sld/continuum.hpp"
#include "sld/discrete.hpp"
#include "sld/errors.hpp"
#include "sld/numerics.hpp"
#include "sld/parallel.hpp"
#include "sld/rng.hpp"
#include "sld/scattering.hpp"
#include "sld/schemes.hpp"
#include "sld/version.hpp"
