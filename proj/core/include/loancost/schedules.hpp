#pragma once

#include "loancost/errors.hpp"
#include "loancost/model.hpp"

namespace loancost {

/// Borrower inputs behind income-driven bounds, currency in thousands per year.
/// Income and subsistence grow at the common rate `growth`.
struct BorrowerProfile {
    double annual_income;
    double subsistence;
    double growth;
    double f_min;
    double f_max;
};

/// Income at or below subsistence leaves nothing to repay from.
class ZeroCapacityError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// m(t) = f_min (income - subsistence) e^{g t}, M(t) = f_max (income - subsistence) e^{g t}.
[[nodiscard]] PaymentBounds bounds_from_profile(const BorrowerProfile& profile);

/// 10% and 30% of income above a $32k subsistence level, both growing at 4%.
/// The default income of $82k gives m(0) = 5 and M(0) = 15.
[[nodiscard]] BorrowerProfile reference_profile(double annual_income = 82.0);

}  // namespace loancost
