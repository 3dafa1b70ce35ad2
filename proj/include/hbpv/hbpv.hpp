#pragma once

#include "hbpv/types.hpp"
#include "hbpv/quadrature.hpp"
#include "hbpv/scalar_kernels.hpp"
#include "hbpv/extended_beta.hpp"
#include "hbpv/triple_series.hpp"
#include "hbpv/integral_reps.hpp"
#include "hbpv/analysis.hpp"
#include "hbpv/sampling.hpp"
#include "hbpv/verify.hpp"
