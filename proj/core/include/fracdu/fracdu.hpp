#pragma once

#include "fracdu/duhamel.hpp"
#include "fracdu/error.hpp"
#include "fracdu/frac_calc.hpp"
#include "fracdu/mittag_leffler.hpp"
#include "fracdu/special.hpp"
#include "fracdu/spectral.hpp"
