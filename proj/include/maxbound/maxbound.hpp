#pragma once

#include "maxbound/bounds.hpp"
#include "maxbound/config.hpp"
#include "maxbound/gfun.hpp"
#include "maxbound/maximal.hpp"
#include "maxbound/parallel.hpp"
#include "maxbound/quadrature.hpp"
#include "maxbound/random.hpp"
#include "maxbound/rational.hpp"
#include "maxbound/report.hpp"
#include "maxbound/search.hpp"
#include "maxbound/stepfn.hpp"
#include "maxbound/verify.hpp"
