#pragma once

#include "gphc/bayes.hpp"
#include "gphc/errors.hpp"
#include "gphc/estimation.hpp"
#include "gphc/exact_dist.hpp"
#include "gphc/experiments.hpp"
#include "gphc/hoel_data.hpp"
#include "gphc/intervals.hpp"
#include "gphc/model.hpp"
#include "gphc/numeric.hpp"
#include "gphc/rng.hpp"
#include "gphc/sample.hpp"
#include "gphc/sample_io.hpp"
#include "gphc/scheme.hpp"

namespace gphc {

inline constexpr const char* version = "0.1.0";

}  // namespace gphc
