#pragma once

#include "curve.hpp"
#include "errors.hpp"
#include "gamma.hpp"
#include "genus1.hpp"
#include "hppade.hpp"
#include "periods.hpp"
#include "poly.hpp"
#include "svg.hpp"
#include "uniform.hpp"
