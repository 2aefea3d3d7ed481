#include "powernet/monomial.hpp"

#include <array>
#include <mutex>

#include "powernet/bivariate.hpp"
#include "powernet/error.hpp"

namespace powernet {

long long BaseSDigits::value() const {
    long long v = 0;
    for (std::size_t i = digits.size(); i-- > 0;) v = v * radix + digits[i];
    return v;
}

PowerNet power_s_net(int s) {
    check_power(s);
    Matrix a0(2, 1, {1.0, -1.0});
    Matrix g0(1, 2, {1.0, (s % 2 == 0) ? 1.0 : -1.0});
    return PowerNet(s, 1, {AffineLayer{std::move(a0), {0.0, 0.0}}, AffineLayer{std::move(g0), {0.0}}});
}

const LambdaCoeffs& monomial_lambda(int n, int s) {
    check_power(s);
    if (n < 1 || n > s) throw ValidationError("monomial_lambda: need 1 <= n <= s");
    static std::mutex mu;
    static std::array<std::array<LambdaCoeffs, kMaxPower + 1>, kMaxPower + 1> cache;
    std::lock_guard<std::mutex> lock(mu);
    LambdaCoeffs& slot = cache[s][n];
    if (slot.lambda.empty()) {
        std::vector<double> d(s + 1, 0.0);
        d[s - n] = 1.0;
        slot = solve_lambda(d, make_nodes(default_scheme(s)));
    }
    return slot;
}

PowerNet shallow_combination_net(int s, const std::vector<std::vector<double>>& polys) {
    check_power(s);
    if (polys.empty()) throw ValidationError("shallow_combination_net: no polynomials");
    const std::vector<double> nodes = make_nodes(default_scheme(s));
    Matrix A1(2 * s, 1);
    std::vector<double> b1(2 * s);
    for (int k = 0; k < s; ++k) {
        A1(2 * k, 0) = 1.0;
        A1(2 * k + 1, 0) = -1.0;
        b1[2 * k] = nodes[k];
        b1[2 * k + 1] = nodes[k] == 0.0 ? 0.0 : -nodes[k];
    }
    const double odd = (s % 2 == 0) ? 1.0 : -1.0;
    Matrix A2(polys.size(), 2 * s);
    std::vector<double> b2(polys.size(), 0.0);
    for (std::size_t p = 0; p < polys.size(); ++p) {
        const auto& c = polys[p];
        if (c.empty() || c.size() > static_cast<std::size_t>(s) + 1)
            throw ValidationError("shallow_combination_net: degree exceeds s");
        double bias = c[0];
        for (std::size_t j = 1; j < c.size(); ++j) {
            if (c[j] == 0.0) continue;
            const LambdaCoeffs& lc = monomial_lambda(static_cast<int>(j), s);
            for (int k = 0; k < s; ++k) {
                A2(p, 2 * k) += c[j] * lc.lambda[k];
                A2(p, 2 * k + 1) += odd * c[j] * lc.lambda[k];
            }
            bias += c[j] * lc.lambda0();
        }
        b2[p] = bias;
    }
    return PowerNet(s, 1, {AffineLayer{std::move(A1), std::move(b1)}, AffineLayer{std::move(A2), std::move(b2)}});
}

PowerNet power_low_net(int n, int s) {
    check_power(s);
    if (n < 1 || n >= s) throw ValidationError("power_low_net: need 1 <= n < s");
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    return shallow_combination_net(s, {c});
}

PowerNet identity_net(int s) { return power_low_net(1, s); }

BaseSDigits base_s_digits(long long n, int s) {
    if (n < 1) throw ValidationError("base_s_digits: n must be positive");
    if (s < 2) throw ValidationError("base_s_digits: radix must be at least 2");
    BaseSDigits d;
    d.radix = s;
    for (long long v = n; v > 0; v /= s) d.digits.push_back(static_cast<int>(v % s));
    return d;
}

bool is_power_of(long long n, int s, int* exponent) {
    if (n < s) return false;
    int m = 0;
    while (n % s == 0) {
        n /= s;
        ++m;
    }
    if (n != 1) return false;
    if (exponent) *exponent = m;
    return true;
}

namespace {

// x -> 1 through a single dead unit; keeps the stage two layers deep
PowerNet constant_one_net(int s) {
    return PowerNet(s, 1, {AffineLayer{Matrix(1, 1), {0.0}}, AffineLayer{Matrix(1, 1), {1.0}}});
}

}  // namespace

PowerNet monomial_net(int n, int s) {
    check_power(s);
    if (n < 0) throw ValidationError("monomial_net: n must be non-negative");
    if (n == 0) return affine_net(s, Matrix(1, 1), {1.0});
    if (n == 1) return affine_net(s, Matrix(1, 1, {1.0}), {0.0});
    if (n == s) return power_s_net(s);
    if (n < s) return power_low_net(n, s);
    int m = 0;
    if (is_power_of(n, s, &m)) {
        PowerNet net = power_s_net(s);
        for (int i = 1; i < m; ++i) net = concat(power_s_net(s), net);
        return net;
    }
    BaseSDigits d = base_s_digits(n, s);
    m = static_cast<int>(d.digits.size()) - 1;
    // carries (x^{s^k}, partial product)
    const int n0 = d.digits[0];
    PowerNet low = n0 == 0 ? constant_one_net(s) : (n0 == 1 ? identity_net(s) : power_low_net(n0, s));
    PowerNet net = parallel(power_s_net(s), low);
    for (int k = 2; k <= m; ++k) net = concat(parallel(power_s_net(s), xny_net(d.digits[k - 1], s)), net);
    return concat(xny_net(d.digits[m], s), net);
}

}  // namespace powernet
