#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "powernet/error.hpp"
#include "powernet/vandermonde.hpp"

using namespace powernet;
using doctest::Approx;

namespace {

// infinity-norm condition from the Lagrange form of the inverse Vandermonde matrix
double lagrange_cond(const std::vector<double>& b) {
    const std::size_t s = b.size();
    double vnorm = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        double row = 0.0;
        for (double bk : b) row += std::pow(std::fabs(bk), static_cast<double>(i));
        vnorm = std::max(vnorm, row);
    }
    double inorm = 0.0;
    for (std::size_t k = 0; k < s; ++k) {
        // coefficients of prod_{j != k} (t - b_j) / (b_k - b_j)
        std::vector<double> c = {1.0};
        double denom = 1.0;
        for (std::size_t j = 0; j < s; ++j) {
            if (j == k) continue;
            std::vector<double> next(c.size() + 1, 0.0);
            for (std::size_t i = 0; i < c.size(); ++i) {
                next[i + 1] += c[i];
                next[i] -= b[j] * c[i];
            }
            c = next;
            denom *= b[k] - b[j];
        }
        double row = 0.0;
        for (double v : c) row += std::fabs(v / denom);
        inorm = std::max(inorm, row);
    }
    return vnorm * inorm;
}

// d stored highest first
double target_eval(const std::vector<double>& d, double x) {
    double acc = 0.0;
    for (double v : d) acc = acc * x + v;
    return acc;
}

}  // namespace

TEST_CASE("node schemes") {
    auto c3 = make_nodes({NodeKind::Chebyshev, 3});
    CHECK(c3 == std::vector<double>{1.0, 0.0, -1.0});
    auto o3 = make_nodes({NodeKind::OptimalSymmetric, 3});
    CHECK(o3[0] == Approx(1.2247448714).epsilon(1e-10));
    CHECK(o3[1] == 0.0);
    CHECK(o3[2] == -o3[0]);
    CHECK(make_nodes({NodeKind::Equidistant, 2}) == std::vector<double>{1.0, -1.0});
    auto e5 = make_nodes({NodeKind::Equidistant, 5});
    CHECK(e5[1] == Approx(0.5));
    auto c7 = make_nodes({NodeKind::Chebyshev, 7});
    for (int k = 1; k <= 7; ++k) CHECK(c7[k - 1] == Approx(std::cos((k - 1) * M_PI / 6)).epsilon(1e-15));
    CHECK_THROWS_AS(make_nodes({NodeKind::OptimalSymmetric, 7}), UnsupportedError);
    CHECK(default_scheme(6).kind == NodeKind::OptimalSymmetric);
    CHECK(default_scheme(7).kind == NodeKind::Chebyshev);
    for (int s = 2; s <= 12; ++s)
        for (NodeKind k : {NodeKind::Chebyshev, NodeKind::Equidistant}) {
            auto b = make_nodes({k, s});
            std::sort(b.begin(), b.end());
            CHECK(std::adjacent_find(b.begin(), b.end()) == b.end());
        }
}

TEST_CASE("scheme names") {
    for (NodeKind k : {NodeKind::Chebyshev, NodeKind::Equidistant, NodeKind::OptimalSymmetric})
        CHECK(parse_node_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_node_kind("gauss"), ValidationError);
}

TEST_CASE("lambda for small targets") {
    std::vector<double> nodes = {1.0, -1.0};
    auto id = solve_lambda(std::vector<double>{0.0, 1.0, 0.0}, nodes);
    CHECK(id.lambda[0] == Approx(0.25));
    CHECK(id.lambda[1] == Approx(-0.25));
    CHECK(id.lambda0() == Approx(0.0));
    auto one = solve_lambda(std::vector<double>{0.0, 0.0, 1.0}, nodes);
    CHECK(one.lambda[0] == 0.0);
    CHECK(one.lambda[1] == 0.0);
    CHECK(one.lambda0() == 1.0);
    auto sq = solve_lambda(std::vector<double>{0.0, 1.0, 0.0, 0.0}, make_nodes({NodeKind::OptimalSymmetric, 3}));
    for (double x : {-1.0, 0.0, 1.0}) CHECK(std::fabs(reconstruct(sq, x) - x * x) <= 1e-12);
    CHECK_THROWS_AS(solve_lambda(std::vector<double>{1.0, 0.0, 0.0}, std::vector<double>{0.5, 0.5}), SingularError);
    CHECK_THROWS_AS(solve_lambda(std::vector<double>{1.0, 0.0}, nodes), ShapeError);
}

TEST_CASE("reconstruction matches the target for every scheme") {
    std::mt19937_64 rng(21);
    for (int s = 2; s <= 12; ++s)
        for (NodeKind k : {NodeKind::Chebyshev, NodeKind::Equidistant, NodeKind::OptimalSymmetric}) {
            if (k == NodeKind::OptimalSymmetric && s > 6) continue;
            auto nodes = make_nodes({k, s});
            const double kappa = cond_inf(nodes);
            auto d = oracle::uniform(rng, s + 1, -1.0, 1.0);
            auto lc = solve_lambda(d, nodes);
            for (double x : oracle::uniform(rng, 100, -2.0, 2.0)) {
                double want = target_eval(d, x);
                CHECK(std::fabs(reconstruct(lc, x) - want) <= 1e-9 * kappa * std::max(1.0, std::fabs(want)));
            }
        }
}

TEST_CASE("residual at Chebyshev probes") {
    for (int s = 2; s <= 12; ++s) {
        auto nodes = make_nodes(default_scheme(s));
        const double kappa = cond_inf(nodes);
        for (int n = 1; n <= s; ++n) {
            std::vector<double> d(s + 1, 0.0);
            d[s - n] = 1.0;
            auto lc = solve_lambda(d, nodes);
            for (int i = 0; i <= s; ++i) {
                double x = std::cos((2 * i + 1) * M_PI / (2 * (s + 1)));
                CHECK(std::fabs(reconstruct(lc, x) - std::pow(x, n)) <= 1e-10 * kappa);
            }
        }
    }
}

TEST_CASE("condition numbers") {
    CHECK(cond_inf(std::vector<double>{1.0, -1.0}) == Approx(2.0).epsilon(1e-15));
    CHECK(cond_inf(std::vector<double>{0.3}) == 1.0);
    CHECK(cond_inf(make_nodes({NodeKind::Chebyshev, 10})) < cond_inf(make_nodes({NodeKind::Equidistant, 10})));
    for (int s = 2; s <= 12; ++s)
        for (NodeKind k : {NodeKind::Chebyshev, NodeKind::Equidistant}) {
            auto b = make_nodes({k, s});
            CHECK(cond_inf(b) == Approx(lagrange_cond(b)).epsilon(1e-8));
        }
    CHECK_THROWS_AS(cond_inf(std::vector<double>{0.1, 0.1}), SingularError);
}

TEST_CASE("condition number ignores node order") {
    std::mt19937_64 rng(8);
    for (int s = 2; s <= 10; ++s) {
        auto b = make_nodes({NodeKind::Chebyshev, s});
        const double base = cond_inf(b);
        for (int t = 0; t < 5; ++t) {
            std::shuffle(b.begin(), b.end(), rng);
            CHECK(cond_inf(b) == Approx(base).epsilon(1e-9));
        }
    }
}

TEST_CASE("condition growth and ordering") {
    for (NodeKind k : {NodeKind::Chebyshev, NodeKind::Equidistant, NodeKind::OptimalSymmetric}) {
        const int top = k == NodeKind::OptimalSymmetric ? 6 : 12;
        double prev = 0.0;
        for (int s = 2; s <= top; ++s) {
            double c = cond_inf(make_nodes({k, s}));
            CHECK(c > prev);
            prev = c;
        }
    }
    for (int s = 5; s <= 12; ++s)
        CHECK(cond_inf(make_nodes({NodeKind::Chebyshev, s})) <= cond_inf(make_nodes({NodeKind::Equidistant, s})));
}

TEST_CASE("cond sweep csv") {
    auto rows = cond_sweep({NodeKind::Chebyshev, NodeKind::OptimalSymmetric}, 8);
    CHECK(rows.size() == 7 + 5);
    std::string csv = cond_csv(rows);
    CHECK(csv.rfind("s,scheme,cond_inf\n2,chebyshev,2\n", 0) == 0);
    CHECK_THROWS_AS(cond_sweep({NodeKind::Chebyshev}, 1), ValidationError);
}
