#pragma once

#include "solwave/analysis.hpp"
#include "solwave/config.hpp"
#include "solwave/error.hpp"
#include "solwave/evolution.hpp"
#include "solwave/functionals.hpp"
#include "solwave/grid.hpp"
#include "solwave/io.hpp"
#include "solwave/longwave.hpp"
#include "solwave/nonlinearity.hpp"
#include "solwave/operators.hpp"
#include "solwave/random.hpp"
#include "solwave/solver.hpp"
#include "solwave/symbol.hpp"

#ifndef SOLWAVE_VERSION
#define SOLWAVE_VERSION "0.1.0"
#endif
