#pragma once

#include <vector>

#include "powernet/netcore.hpp"
#include "powernet/vandermonde.hpp"

namespace powernet {

struct BaseSDigits {
    std::vector<int> digits;  // least significant first
    int radix = 2;

    long long value() const;
};

PowerNet power_s_net(int s);
PowerNet power_low_net(int n, int s);
BaseSDigits base_s_digits(long long n, int s);
PowerNet monomial_net(int n, int s);

// λ for x^n, 1 <= n <= s, at the default nodes for s (cached)
const LambdaCoeffs& monomial_lambda(int n, int s);

// One hidden layer of 2s units on a scalar input shared by several
// polynomials of degree <= s (ascending coefficients); one output each.
PowerNet shallow_combination_net(int s, const std::vector<std::vector<double>>& polys);

// true when n = s^m for some m >= 1
bool is_power_of(long long n, int s, int* exponent = nullptr);

}  // namespace powernet
