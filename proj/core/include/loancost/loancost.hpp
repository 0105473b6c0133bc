#pragma once

#include "loancost/dp_oracle.hpp"
#include "loancost/dynamics.hpp"
#include "loancost/errors.hpp"
#include "loancost/model.hpp"
#include "loancost/numerics.hpp"
#include "loancost/parallel.hpp"
#include "loancost/rate_curve.hpp"
#include "loancost/schedules.hpp"
#include "loancost/simple_interest.hpp"
#include "loancost/theorem.hpp"
