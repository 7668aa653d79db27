#pragma once

#include "errors.hpp"
#include "expansion.hpp"
#include "kernels.hpp"
#include "measure.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "special_fn.hpp"
#include "summability.hpp"
