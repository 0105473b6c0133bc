#include <cmath>
#include <cstdio>

#include <loancost/loancost.hpp>

int main() {
    const loancost::LoanTerms terms(0.03, 0.04, 0.4, 25.0);
    const double c = loancost::marginal_cost(terms, loancost::InterestMode::Compound);
    std::printf("marginal cost %.6f\n", c);
    return std::abs(c - 0.4 * std::exp(1.0)) < 1e-12 ? 0 : 1;
}
