#pragma once

#include "latsym/classify.hpp"
#include "latsym/errors.hpp"
#include "latsym/expr.hpp"
#include "latsym/factorization.hpp"
#include "latsym/fft.hpp"
#include "latsym/frame.hpp"
#include "latsym/gaussian.hpp"
#include "latsym/grid.hpp"
#include "latsym/io.hpp"
#include "latsym/matrix.hpp"
#include "latsym/operators.hpp"
#include "latsym/rng.hpp"
#include "latsym/symplectic.hpp"
