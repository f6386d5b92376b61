#pragma once

#include "rotalign/units.hpp"
#include "rotalign/rotor_core.hpp"
#include "rotalign/molecules.hpp"
#include "rotalign/pulses.hpp"
#include "rotalign/propagator.hpp"
#include "rotalign/parallel.hpp"
#include "rotalign/observables.hpp"
#include "rotalign/design_search.hpp"
#include "rotalign/shaper.hpp"
#include "rotalign/presets.hpp"
