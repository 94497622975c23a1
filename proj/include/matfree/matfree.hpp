#ifndef MATFREE_MATFREE_HPP
#define MATFREE_MATFREE_HPP

#include "matfree/block_model.hpp"
#include "matfree/convolve.hpp"
#include "matfree/fock.hpp"
#include "matfree/fock_collapsed.hpp"
#include "matfree/limit_law.hpp"
#include "matfree/matrix.hpp"
#include "matfree/ncpart.hpp"
#include "matfree/numeric.hpp"
#include "matfree/series.hpp"
#include "matfree/trace_fn.hpp"
#include "matfree/tree_walk.hpp"

#endif  // MATFREE_MATFREE_HPP
