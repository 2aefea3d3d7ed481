#include "powernet/poly1d.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "powernet/bivariate.hpp"
#include "powernet/error.hpp"
#include "powernet/monomial.hpp"
#include "stages.hpp"

namespace powernet {

PolyCoeffs::PolyCoeffs(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw ValidationError("polynomial needs at least one coefficient");
    for (double v : coeffs_)
        if (!std::isfinite(v)) throw ValidationError("non-finite polynomial coefficient");
}

double PolyCoeffs::l1_norm() const {
    double s = 0.0;
    for (double v : coeffs_) s += std::fabs(v);
    return s;
}

std::string to_string(Strategy st) {
    switch (st) {
        case Strategy::Shallow: return "shallow";
        case Strategy::Horner: return "horner";
        case Strategy::Recursive: return "recursive";
        case Strategy::Optimal: return "optimal";
        case Strategy::Auto: return "auto";
    }
    return "?";
}

Strategy parse_strategy(const std::string& name) {
    if (name == "shallow") return Strategy::Shallow;
    if (name == "horner") return Strategy::Horner;
    if (name == "recursive") return Strategy::Recursive;
    if (name == "optimal") return Strategy::Optimal;
    if (name == "auto") return Strategy::Auto;
    throw ValidationError("unknown strategy \"" + name + "\"");
}

double horner_eval(const PolyCoeffs& p, double x) {
    double acc = 0.0;
    for (int k = p.degree(); k >= 0; --k) acc = acc * x + p[k];
    return acc;
}

PowerNet shallow_poly_net(const PolyCoeffs& p, int s) {
    check_power(s);
    if (p.degree() > s)
        throw StrategyError("shallow net handles degree <= s; use horner, recursive or optimal for degree " +
                            std::to_string(p.degree()));
    return shallow_combination_net(s, {p.coeffs()});
}


namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

// The product kernels lose accuracy when one factor dwarfs the other, so the
// deep builders run on coefficients scaled by a power of two into the unit l1
// ball; the output layer undoes the scale exactly.
template <class Build>
PowerNet unit_scaled(const PolyCoeffs& p, Build build) {
    int e = 0;
    std::frexp(p.l1_norm(), &e);
    if (e <= 0) return build(p);
    std::vector<double> c = p.coeffs();
    for (double& v : c) v = std::ldexp(v, -e);
    PowerNet net = build(PolyCoeffs(std::move(c)));
    std::vector<AffineLayer> layers = net.layers();
    AffineLayer& last = layers.back();
    for (std::size_t r = 0; r < last.A.rows(); ++r)
        for (std::size_t j = 0; j < last.A.cols(); ++j) last.A(r, j) = std::ldexp(last.A(r, j), e);
    for (double& v : last.b) v = std::ldexp(v, e);
    return PowerNet(net.power(), net.input_dim(), std::move(layers));
}

PowerNet horner_unscaled(const PolyCoeffs& p, int s) {
    const int n = p.degree();
    // x -> (x, a_n)
    PowerNet net = affine_net(s, Matrix(2, 1, {1.0, 0.0}), {0.0, p[n]});
    const PowerNet id = identity_net(s);
    const PowerNet prod = xny_net(1, s);
    for (int k = n; k >= 1; --k) {
        PowerNet stage = k > 1 ? assemble(2, 2, {{id, {0}, {0}}, {prod, {0, 1}, {1}}}, {0.0, p[k - 1]})
                               : assemble(2, 1, {{prod, {0, 1}, {0}}}, {p[0]});
        net = concat(stage, net);
    }
    return net;
}

// groups of s coefficients, the last one widened to s+1
std::vector<std::vector<double>> coefficient_groups(const PolyCoeffs& p, int s) {
    const int n = p.degree();
    const int groups = ceil_div(n, s);
    std::vector<std::vector<double>> out;
    for (int k = 0; k < groups; ++k) {
        const int width = (k == groups - 1) ? s + 1 : s;
        std::vector<double> g(width, 0.0);
        for (int j = 0; j < width && k * s + j <= n; ++j) g[j] = p[k * s + j];
        out.push_back(std::move(g));
    }
    return out;
}

PowerNet recursive_unscaled(const PolyCoeffs& p, int s) {
    auto groups = coefficient_groups(p, s);
    int count = static_cast<int>(groups.size());
    PowerNet net = parallel(power_s_net(s), shallow_combination_net(s, groups));
    while (count > 1) {
        const bool more = detail::reductions(count, s) > 1;
        net = concat(detail::pm_stage(s, count, more, &count), net);
    }
    return net;
}

PowerNet optimal_unscaled(const PolyCoeffs& p, int s) {
    auto groups = coefficient_groups(p, s);
    int count = static_cast<int>(groups.size());
    const int left = detail::reductions(count, s);  // >= 1 here
    // (x^s, x)
    PowerNet net = parallel(power_s_net(s), identity_net(s));
    {
        // in (z, x) -> [z^s] [z^1..z^{s-1}] [group polynomials in x]
        std::vector<Block> blocks;
        std::size_t out = 0;
        if (left >= 2) blocks.push_back({power_s_net(s), {0}, {out++}});
        std::vector<std::vector<double>> powers;
        std::vector<std::size_t> pouts;
        for (int j = 1; j < s; ++j) {
            std::vector<double> c(j + 1, 0.0);
            c[j] = 1.0;
            powers.push_back(std::move(c));
            pouts.push_back(out++);
        }
        blocks.push_back({shallow_combination_net(s, powers), {0}, pouts});
        std::vector<std::size_t> gouts;
        for (int k = 0; k < count; ++k) gouts.push_back(out++);
        blocks.push_back({shallow_combination_net(s, groups), {1}, gouts});
        net = concat(assemble(2, out, blocks), net);
    }
    while (count > 1) {
        const int r = detail::reductions(count, s);
        net = concat(detail::reduce_stage(s, count, r >= 2, r >= 3, r >= 2, false, &count), net);
    }
    return net;
}

}  // namespace

PowerNet horner_net(const PolyCoeffs& p, int s) {
    check_power(s);
    const int n = p.degree();
    if (n < 1) throw ValidationError("horner net needs degree >= 1");
    return unit_scaled(p, [s](const PolyCoeffs& q) { return horner_unscaled(q, s); });
}

PowerNet recursive_poly_net(const PolyCoeffs& p, int s) {
    check_power(s);
    if (p.degree() <= s) return shallow_poly_net(p, s);
    return unit_scaled(p, [s](const PolyCoeffs& q) { return recursive_unscaled(q, s); });
}

PowerNet optimal_poly_net(const PolyCoeffs& p, int s) {
    check_power(s);
    // degree <= 1 needs no hidden layer at all
    if (p.degree() <= 1) return affine_net(s, Matrix(1, 1, {p.degree() == 1 ? p[1] : 0.0}), {p[0]});
    if (p.degree() <= s) return shallow_poly_net(p, s);
    return unit_scaled(p, [s](const PolyCoeffs& q) { return optimal_unscaled(q, s); });
}

PowerNet build_poly_net(const PolyCoeffs& p, int s, Strategy strategy) {
    switch (strategy) {
        case Strategy::Shallow: return shallow_poly_net(p, s);
        case Strategy::Horner: return horner_net(p, s);
        case Strategy::Recursive: return recursive_poly_net(p, s);
        case Strategy::Optimal: return optimal_poly_net(p, s);
        case Strategy::Auto: return p.degree() <= s ? shallow_poly_net(p, s) : optimal_poly_net(p, s);
    }
    throw StrategyError("unknown strategy");
}

PolyCoeffs parse_coeffs(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ParseError("empty coefficient file");
    std::vector<double> c;
    if (text[first] == '[') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("malformed JSON: ") + e.what());
        }
        if (!doc.is_array()) throw ParseError("coefficients: expected a JSON array");
        for (std::size_t i = 0; i < doc.size(); ++i) {
            if (!doc[i].is_number()) throw ParseError("coefficients[" + std::to_string(i) + "]: expected a number");
            c.push_back(doc[i].get<double>());
        }
    } else {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            auto e = line.find_last_not_of(" \t\r,");
            std::string tok = line.substr(b, e - b + 1);
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) throw ParseError("line " + std::to_string(lineno) + ": not a number: " + tok);
            c.push_back(v);
        }
    }
    if (c.empty()) throw ParseError("no coefficients found");
    return PolyCoeffs(std::move(c));
}

}  // namespace powernet
