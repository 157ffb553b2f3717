#pragma once

#include "jmatrix/error.hpp"
#include "jmatrix/format.hpp"
#include "jmatrix/jacspec.hpp"
#include "jmatrix/lame.hpp"
#include "jmatrix/lowering.hpp"
#include "jmatrix/morse.hpp"
#include "jmatrix/opfamilies.hpp"
#include "jmatrix/poly_io.hpp"
#include "jmatrix/polynomial.hpp"
#include "jmatrix/rational.hpp"
#include "jmatrix/report.hpp"
#include "jmatrix/sampling.hpp"
#include "jmatrix/scalar.hpp"
#include "jmatrix/special.hpp"
#include "jmatrix/tdop.hpp"
#include "jmatrix/verify.hpp"
