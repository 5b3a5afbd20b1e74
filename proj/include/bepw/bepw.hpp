#pragma once

#include "bepw/core/derivative.hpp"
#include "bepw/core/fft.hpp"
#include "bepw/core/field.hpp"
#include "bepw/core/filter.hpp"
#include "bepw/core/grid.hpp"
#include "bepw/core/interp.hpp"
#include "bepw/core/lsq.hpp"
#include "bepw/core/norms.hpp"
#include "bepw/core/pressure.hpp"
#include "bepw/core/snapshot.hpp"
#include "bepw/electro/electro.hpp"
#include "bepw/electro/tridiag.hpp"
#include "bepw/error.hpp"
#include "bepw/greenfn/duhamel.hpp"
#include "bepw/greenfn/kernel.hpp"
#include "bepw/greenfn/sigma.hpp"
#include "bepw/greenfn/symbol.hpp"
#include "bepw/harness/apriori.hpp"
#include "bepw/harness/config.hpp"
#include "bepw/harness/experiment.hpp"
#include "bepw/harness/fit.hpp"
#include "bepw/harness/theory.hpp"
#include "bepw/hydro/init.hpp"
#include "bepw/hydro/perturbation.hpp"
#include "bepw/hydro/run.hpp"
#include "bepw/hydro/scheme.hpp"
#include "bepw/hydro/state.hpp"
#include "bepw/profile/background.hpp"
#include "bepw/profile/profile.hpp"
#include "bepw/profile/shift.hpp"
