#pragma once

#include "wittkit/errors.hpp"
#include "wittkit/ih.hpp"
#include "wittkit/rational.hpp"
#include "wittkit/resolution.hpp"
#include "wittkit/simplicial_complex.hpp"
#include "wittkit/sparse_matrix.hpp"
#include "wittkit/spectral.hpp"
#include "wittkit/stratification.hpp"
#include "wittkit/witt.hpp"
