#pragma once

#include "strata/dual.hpp"
#include "strata/error.hpp"
#include "strata/field.hpp"
#include "strata/group.hpp"
#include "strata/hcalc.hpp"
#include "strata/picone.hpp"
#include "strata/quad.hpp"
#include "strata/random_fields.hpp"
#include "strata/report.hpp"
#include "strata/sampling.hpp"
#include "strata/verify/exponential.hpp"
#include "strata/verify/hardy.hpp"
#include "strata/verify/particles.hpp"
#include "strata/verify/report.hpp"
#include "strata/verify/singular.hpp"
