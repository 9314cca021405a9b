#pragma once

#include "riskfrac/coefficients.hpp"
#include "riskfrac/csv.hpp"
#include "riskfrac/distribution_io.hpp"
#include "riskfrac/errors.hpp"
#include "riskfrac/optimizer.hpp"
#include "riskfrac/outcome_space.hpp"
#include "riskfrac/rational.hpp"
#include "riskfrac/risk_averse.hpp"
#include "riskfrac/simulator.hpp"
#include "riskfrac/summation.hpp"
#include "riskfrac/trade_distribution.hpp"
