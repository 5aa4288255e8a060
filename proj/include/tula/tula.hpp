#pragma once

#include "tula/drift.hpp"
#include "tula/errors.hpp"
#include "tula/kernels.hpp"
#include "tula/lyapunov.hpp"
#include "tula/oracles.hpp"
#include "tula/potentials.hpp"
#include "tula/stats.hpp"
