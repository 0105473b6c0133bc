#include "loancost/schedules.hpp"

#include <cmath>

namespace loancost {

PaymentBounds bounds_from_profile(const BorrowerProfile& profile) {
    if (!std::isfinite(profile.annual_income) || !std::isfinite(profile.subsistence))
        throw InvalidArgument("income and subsistence must be finite");
    if (!(profile.annual_income > profile.subsistence))
        throw ZeroCapacityError("income must exceed subsistence: repayment capacity is zero");
    if (!(profile.f_min > 0.0)) throw InvalidArgument("f_min must be > 0");
    if (!(profile.f_max > profile.f_min)) throw InvalidArgument("f_max must exceed f_min");
    return PaymentBounds::exponential_income({profile.annual_income, profile.subsistence,
                                              profile.growth, profile.f_min, profile.f_max});
}

BorrowerProfile reference_profile(double annual_income) {
    return {annual_income, 32.0, 0.04, 0.10, 0.30};
}

}  // namespace loancost
