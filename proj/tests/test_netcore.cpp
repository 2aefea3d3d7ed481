#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "powernet/bivariate.hpp"
#include "powernet/error.hpp"
#include "powernet/format.hpp"
#include "powernet/monomial.hpp"
#include "powernet/netcore.hpp"

using namespace powernet;
using doctest::Approx;

TEST_CASE("power net evaluates squares of both signs") {
    PowerNet sq = power_s_net(2);
    CHECK(evaluate(sq, {3.0})[0] == 9.0);
    CHECK(evaluate(sq, {-3.0})[0] == 9.0);
    CHECK(evaluate_scalar(power_s_net(3), -2.0) == -8.0);
}

TEST_CASE("identity net") {
    CHECK(evaluate_scalar(identity_net(2), 0.5) == Approx(0.5).epsilon(1e-15));
    CHECK(evaluate_scalar(identity_net(2), 2.0) == Approx(2.0).epsilon(1e-15));
    CHECK(evaluate_scalar(identity_net(3), -0.7) == Approx(-0.7).epsilon(1e-14));
    CHECK(std::fabs(evaluate_scalar(identity_net(2), 0.0)) < 1e-15);
    for (int s = 2; s <= kMaxPower; ++s) {
        NetStats st = stats(identity_net(s));
        CHECK(st.depth == 2);
        CHECK(st.nodes == static_cast<std::size_t>(2 * s));
    }
}

TEST_CASE("stats of small nets") {
    NetStats st = stats(power_s_net(2));
    CHECK(st.depth == 2);
    CHECK(st.nodes == 2);
    CHECK(st.nonzeros == 4);
    CHECK(stats(identity_net(2)).nodes == 4);
    CHECK(stats(concat(power_s_net(2), power_s_net(2))).depth == 3);
    CHECK(hidden_layers(power_s_net(2)) == 1);
}

TEST_CASE("concat composes") {
    CHECK(evaluate_scalar(concat(power_s_net(2), power_s_net(2)), 2.0) == 16.0);
    CHECK(evaluate_scalar(concat(identity_net(3), power_s_net(3)), 1.1) == Approx(1.331).epsilon(1e-13));
    PowerNet a = concat(power_s_net(2), identity_net(2));
    PowerNet b = concat(a, power_s_net(2));
    CHECK(b.depth() == a.depth() + 2 - 1);
    // the junction layer is the product of the adjoining layers
    const PowerNet outer = power_s_net(2), inner = identity_net(2);
    Matrix want = outer.layer(0).A * inner.layer(1).A;
    CHECK(a.layer(1).A == want);
}

TEST_CASE("composition law on [-10,10]") {
    std::mt19937_64 rng(11);
    PowerNet f = parallel(power_s_net(3), identity_net(3));  // x -> (x^3, x)
    PowerNet g = xny_net(1, 3);                              // (x, y) -> x y
    PowerNet gf = concat(g, f);
    for (double x : oracle::uniform(rng, 100, -10.0, 10.0)) {
        auto inner = evaluate(f, {x});
        double want = evaluate(g, inner)[0];
        CHECK(evaluate_scalar(gf, x) == Approx(want).epsilon(1e-12));
        CHECK(evaluate_scalar(gf, x) == Approx(std::pow(x, 4)).epsilon(1e-12));
    }
}

TEST_CASE("parallel stacks outputs and adds stats") {
    PowerNet p = parallel(power_s_net(2), identity_net(2));
    auto y = evaluate(p, {3.0});
    REQUIRE(y.size() == 2);
    CHECK(y[0] == 9.0);
    CHECK(y[1] == Approx(3.0).epsilon(1e-15));
    CHECK(stats(p).nodes == 6);
    CHECK(stats(p).nonzeros == stats(power_s_net(2)).nonzeros + stats(identity_net(2)).nonzeros);
    auto z = evaluate(parallel(identity_net(2), identity_net(2)), {1.0});
    CHECK(z[0] == Approx(1.0));
    CHECK(z[1] == Approx(1.0));
    CHECK_THROWS_AS(parallel(power_s_net(2), concat(power_s_net(2), power_s_net(2))), ShapeError);
    CHECK_THROWS_AS(parallel(power_s_net(2), power_s_net(3)), ValidationError);
}

TEST_CASE("tensor acts on disjoint inputs") {
    PowerNet t = tensor(power_s_net(2), power_s_net(2));
    CHECK(t.input_dim() == 2);
    auto y = evaluate(t, {2.0, 3.0});
    CHECK(y[0] == 4.0);
    CHECK(y[1] == 9.0);
    auto z = evaluate(tensor(identity_net(2), identity_net(2)), {1.0, -1.0});
    CHECK(z[0] == Approx(1.0));
    CHECK(z[1] == Approx(-1.0));
    PowerNet a = identity_net(3), b = power_s_net(3);
    PowerNet ab = tensor(a, b);
    for (std::size_t k = 0; k < ab.depth(); ++k) CHECK(ab.layer(k).out_dim() == a.layer(k).out_dim() + b.layer(k).out_dim());
    CHECK(stats(ab).nonzeros == stats(a).nonzeros + stats(b).nonzeros);
}

TEST_CASE("shared first input tensor") {
    PowerNet zy = xny_net(1, 2);
    PowerNet two = shared_first_input_tensor({zy, zy});
    CHECK(two.input_dim() == 3);
    auto y = evaluate(two, {2.0, 3.0, 5.0});
    CHECK(y[0] == Approx(6.0).epsilon(1e-14));
    CHECK(y[1] == Approx(10.0).epsilon(1e-14));
    CHECK(shared_first_input_tensor({zy}) == zy);
}

TEST_CASE("evaluate rejects bad input") {
    PowerNet sq = power_s_net(2);
    CHECK_THROWS_AS(evaluate(sq, {1.0, 2.0}), ShapeError);
    CHECK_THROWS_AS(evaluate(sq, {NAN}), ValidationError);
    CHECK_THROWS_AS(evaluate(monomial_net(200, 2), {1e10}), OverflowError);
}

TEST_CASE("construction validates invariants") {
    CHECK_THROWS_AS(check_power(1), ValidationError);
    CHECK_THROWS_AS(check_power(kMaxPower + 1), ValidationError);
    CHECK_THROWS_AS(PowerNet(2, 1, {}), ValidationError);
    CHECK_THROWS_AS(PowerNet(2, 2, {AffineLayer{Matrix(1, 1, 1.0), {0.0}}}), ShapeError);
    CHECK_THROWS_AS(PowerNet(2, 1, {AffineLayer{Matrix(1, 1, 1.0), {0.0, 1.0}}}), ShapeError);
    CHECK_THROWS_AS(PowerNet(2, 1, {AffineLayer{Matrix(1, 1, INFINITY), {0.0}}}), ValidationError);
}

TEST_CASE("batch evaluation matches pointwise") {
    PowerNet net = monomial_net(13, 3);
    std::mt19937_64 rng(3);
    std::vector<std::vector<double>> pts;
    for (double x : oracle::uniform(rng, 500, -1.0, 1.0)) pts.push_back({x});
    auto batch = evaluate_batch(net, pts, 4);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(batch[i] == evaluate(net, pts[i]));
    CHECK(evaluate_batch(net, pts, 1) == batch);
}

TEST_CASE("nets are piecewise polynomials of bounded degree") {
    // the square chain is a quartic, so fifth differences vanish
    PowerNet q = concat(power_s_net(2), power_s_net(2));
    const double h = 0.125;
    for (double x0 : {0.5, 1.0, 2.0}) {
        double d5 = 0.0;
        const double c[] = {-1, 5, -10, 10, -5, 1};
        for (int i = 0; i <= 5; ++i) d5 += c[i] * evaluate_scalar(q, x0 + i * h);
        CHECK(std::fabs(d5) < 1e-9);
    }
}

TEST_CASE("serialization round trip") {
    PowerNet net = monomial_net(29, 3);
    std::string text = serialize(net);
    PowerNet back = deserialize(text);
    CHECK(back == net);
    CHECK(serialize(back) == text);
    CHECK(deserialize(serialize(power_s_net(2))).depth() == 2);
}

TEST_CASE("deserialize reports problems") {
    CHECK_THROWS_AS(deserialize("{"), ParseError);
    CHECK_THROWS_AS(deserialize(R"({"power":2,"input_dim":1})"), ParseError);
    // mismatched layer dims
    CHECK_THROWS_AS(
        deserialize(R"({"power":2,"input_dim":1,"layers":[{"A":[[1],[1]],"b":[0,0]},{"A":[[1,1,1]],"b":[0]}]})"),
        ShapeError);
    try {
        deserialize(R"({"power":2,"input_dim":1,"layers":[{"A":[[1]],"b":[0]},{"A":[["x"]],"b":[0]}]})");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("$.layers[1].A[0]") != std::string::npos);
    }
}

TEST_CASE("format_real is shortest round trip") {
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(2.0) == "2");
    CHECK(format_real(-0.25) == "-0.25");
    std::mt19937_64 rng(5);
    for (double v : oracle::uniform(rng, 200, -1e6, 1e6)) CHECK(std::stod(format_real(v)) == v);
}

TEST_CASE("dot product summation") {
    std::vector<double> a(1000, 0.1), b(1000, 1.0);
    CHECK(dot(a, b) == Approx(100.0).epsilon(1e-14));
    std::vector<double> c = {1.0, 2.0, 3.0}, d = {4.0, 5.0, 6.0};
    CHECK(dot(c, d) == 32.0);
}

TEST_CASE("assemble routes blocks") {
    // (x, y) -> (x^2 + y^2, x y + 1)
    PowerNet net = assemble(2, 2, {{power_s_net(2), {0}, {0}}, {power_s_net(2), {1}, {0}}, {xny_net(1, 2), {0, 1}, {1}}},
                            {0.0, 1.0});
    auto y = evaluate(net, {2.0, -3.0});
    CHECK(y[0] == Approx(13.0).epsilon(1e-14));
    CHECK(y[1] == Approx(-5.0).epsilon(1e-14));
    CHECK(evaluate(widen_input(power_s_net(2), 3), {4.0, 100.0, 100.0})[0] == 16.0);
    CHECK(evaluate(delay(power_s_net(2), 2), {3.0})[0] == Approx(9.0).epsilon(1e-14));
    CHECK(delay(power_s_net(2), 2).depth() == 4);
}
