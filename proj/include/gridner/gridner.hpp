#pragma once

#include "gridner/ensemble.hpp"
#include "gridner/errors.hpp"
#include "gridner/eval.hpp"
#include "gridner/formats.hpp"
#include "gridner/grid.hpp"
#include "gridner/optim.hpp"
#include "gridner/random.hpp"
#include "gridner/synth.hpp"
#include "gridner/textnorm.hpp"
#include "gridner/toymodel.hpp"
#include "gridner/unicode.hpp"
