#pragma once

#include "sfwm/analysis.hpp"
#include "sfwm/config.hpp"
#include "sfwm/constants.hpp"
#include "sfwm/dispersion.hpp"
#include "sfwm/dispersion_table.hpp"
#include "sfwm/errors.hpp"
#include "sfwm/io.hpp"
#include "sfwm/modes.hpp"
#include "sfwm/ode_oracle.hpp"
#include "sfwm/parallel.hpp"
#include "sfwm/pcf.hpp"
#include "sfwm/propagation.hpp"
#include "sfwm/pump.hpp"
#include "sfwm/sellmeier.hpp"
#include "sfwm/sweep.hpp"
#include "sfwm/transfer_matrix.hpp"
#include "sfwm/version.hpp"
#include "sfwm/waveguide.hpp"
