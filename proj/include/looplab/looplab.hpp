#pragma once

#include "numeric.hpp"
#include "combinatorics.hpp"
#include "weights.hpp"
#include "geometry.hpp"
#include "enumeration.hpp"
#include "observable.hpp"
#include "zinvariance.hpp"
#include "appendix.hpp"
#include "report.hpp"
#include "suite.hpp"
