#pragma once

#include "diagnostics.hpp"
#include "gronwall.hpp"
#include "initial_data.hpp"
#include "lifespan.hpp"
#include "littlewood_paley.hpp"
#include "mhd.hpp"
#include "picard.hpp"
#include "propagators.hpp"
#include "spectral.hpp"
