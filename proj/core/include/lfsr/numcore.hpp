#pragma once

#include "lfsr/numcore/branch_trace.hpp"
#include "lfsr/numcore/conv.hpp"
#include "lfsr/numcore/errors.hpp"
#include "lfsr/numcore/ops.hpp"
#include "lfsr/numcore/optim.hpp"
#include "lfsr/numcore/params.hpp"
#include "lfsr/numcore/patches.hpp"
#include "lfsr/numcore/random.hpp"
#include "lfsr/numcore/record.hpp"
#include "lfsr/numcore/resample.hpp"
#include "lfsr/numcore/tensor.hpp"
