#include "powernet/bivariate.hpp"

#include "powernet/error.hpp"
#include "powernet/monomial.hpp"

namespace powernet {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double neg(double v) { return v == 0.0 ? 0.0 : -v; }

double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

}  // namespace

double symmetric_product_rhs(int s, std::span<const double> x) {
    if (s < 1) throw ValidationError("symmetric_product_rhs: s must be positive");
    if (x.size() != static_cast<std::size_t>(s)) throw ShapeError("symmetric_product_rhs: need s values");
    // bit i of mask flips x_{i+2}; x_1 keeps its sign
    double acc = 0.0;
    const unsigned subsets = 1u << (s - 1);
    for (unsigned mask = 0; mask < subsets; ++mask) {
        double sum = x[0];
        int flips = 0;
        for (int i = 1; i < s; ++i) {
            if (mask & (1u << (i - 1))) {
                sum -= x[i];
                ++flips;
            } else {
                sum += x[i];
            }
        }
        double term = ipow(sum, s);
        acc += (flips % 2 ? -term : term);
    }
    return acc;
}

int kernel_length(int n, int s) { return 2 * (n + 1) * (s - n); }

XnYKernel xny_kernel(int n, int s) {
    check_power(s);
    if (n < 0 || n > s - 1) throw ValidationError("xny_kernel: need 0 <= n <= s-1");
    XnYKernel k;
    k.n = n;
    k.s = s;
    double scale = 1.0;
    for (int i = 2; i <= s; ++i) scale *= i;
    scale *= ipow(2.0, s - 1);
    const double odd = (s % 2 == 0) ? 1.0 : -1.0;
    // term (j, r) in column-major order of the (s-n) x (n+1) coefficient grid,
    // each term split into the σ(t), σ(-t) pair
    for (int r = 0; r <= n; ++r)
        for (int j = 0; j <= s - n - 1; ++j) {
            double g = binom(s - n - 1, j) * binom(n, r) / scale;
            if ((j + r) % 2) g = -g;
            double ax = n - 2 * r;
            double b = s - n - 1 - 2 * j;
            k.gamma.push_back(g);
            k.alpha_x.push_back(ax);
            k.alpha_y.push_back(1.0);
            k.beta.push_back(b);
            k.gamma.push_back(odd * g);
            k.alpha_x.push_back(neg(ax));
            k.alpha_y.push_back(-1.0);
            k.beta.push_back(neg(b));
        }
    return k;
}

PowerNet xny_net(int n, int s) {
    XnYKernel k = xny_kernel(n, s);
    const std::size_t u = k.length();
    Matrix A1(u, 2);
    for (std::size_t i = 0; i < u; ++i) {
        A1(i, 0) = k.alpha_x[i];
        A1(i, 1) = k.alpha_y[i];
    }
    Matrix A2(1, u, k.gamma);
    return PowerNet(s, 2, {AffineLayer{std::move(A1), k.beta}, AffineLayer{std::move(A2), {0.0}}});
}

PowerNet pm_net(int s) { return pm_net(s, s); }

PowerNet pm_net(int s, int terms) {
    check_power(s);
    if (terms < 1 || terms > s) throw ValidationError("pm_net: need 1 <= terms <= s");
    std::vector<Block> blocks;
    blocks.push_back({identity_net(s), {1}, {0}});
    for (int k = 1; k < terms; ++k)
        blocks.push_back({xny_net(k, s), {0, static_cast<std::size_t>(k + 1)}, {0}});
    return assemble(static_cast<std::size_t>(terms) + 1, 1, blocks);
}

int pm_node_bound(int s) { return (s * s * s + 3 * s * s + 2 * s) / 3; }

}  // namespace powernet
