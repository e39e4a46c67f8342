#pragma once

#include "distmat/bench.hpp"
#include "distmat/centering.hpp"
#include "distmat/common.hpp"
#include "distmat/condensed.hpp"
#include "distmat/distance_matrix.hpp"
#include "distmat/lsmat.hpp"
#include "distmat/mantel.hpp"
#include "distmat/pcoa.hpp"
#include "distmat/permutation.hpp"
#include "distmat/symmetric_eigen.hpp"
