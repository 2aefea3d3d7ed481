#pragma once

#include <span>
#include <vector>

#include "powernet/netcore.hpp"

namespace powernet {

// Coefficients of one hidden layer realizing x^n * y:
// x^n y = Σ gamma_i σ_s(alpha_x_i x + alpha_y_i y + beta_i)
struct XnYKernel {
    int n = 0;
    int s = 2;
    std::vector<double> gamma;
    std::vector<double> alpha_x;
    std::vector<double> alpha_y;
    std::vector<double> beta;

    std::size_t length() const { return gamma.size(); }
};

// (Σx)^s plus the signed sign-flip sums; equals 2^{s-1} s! Π x_k
double symmetric_product_rhs(int s, std::span<const double> x);

// 2(n+1)(s-n)
int kernel_length(int n, int s);

XnYKernel xny_kernel(int n, int s);
// input (x, y), output x^n y
PowerNet xny_net(int n, int s);

// input (x, y_0..y_{terms-1}), output Σ x^k y_k; terms defaults to s
PowerNet pm_net(int s);
PowerNet pm_net(int s, int terms);
// (s^3 + 3s^2 + 2s) / 3
int pm_node_bound(int s);

}  // namespace powernet
