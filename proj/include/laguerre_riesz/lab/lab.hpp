#pragma once

#include "acceptance.hpp"
#include "config.hpp"
#include "experiments_radial.hpp"
#include "experiments_spectral.hpp"
#include "fitting.hpp"
#include "output.hpp"
#include "radial.hpp"
#include "registry.hpp"
#include "report.hpp"
#include "sharpness.hpp"
