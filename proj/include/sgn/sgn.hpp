#ifndef SGN_SGN_HPP_
#define SGN_SGN_HPP_

#include "sgn/checkpoint.hpp"
#include "sgn/error.hpp"
#include "sgn/estimators.hpp"
#include "sgn/harness.hpp"
#include "sgn/io.hpp"
#include "sgn/model.hpp"
#include "sgn/presets.hpp"
#include "sgn/riccati.hpp"
#include "sgn/rng.hpp"
#include "sgn/stats.hpp"

#endif  // SGN_SGN_HPP_
