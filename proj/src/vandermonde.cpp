#include "powernet/vandermonde.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "powernet/error.hpp"
#include "powernet/format.hpp"

namespace powernet {

std::string to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Chebyshev: return "chebyshev";
        case NodeKind::Equidistant: return "equidistant";
        case NodeKind::OptimalSymmetric: return "optimal";
    }
    return "?";
}

NodeKind parse_node_kind(const std::string& name) {
    if (name == "chebyshev") return NodeKind::Chebyshev;
    if (name == "equidistant") return NodeKind::Equidistant;
    if (name == "optimal") return NodeKind::OptimalSymmetric;
    throw ValidationError("unknown node scheme \"" + name + "\"");
}

namespace {

// positive half of the tabulated optimal sets, largest first
const std::vector<std::vector<double>> kOptimalHalf = {
    {},
    {},
    {1.0},
    {1.2247448713915890},
    {1.2228992744, 0.5552395908},
    {1.2001030479, 0.8077421768},
    {1.1601101028, 0.9771502216, 0.3788765912},
};

std::vector<double> mirror(const std::vector<double>& half, int s) {
    std::vector<double> b(s, 0.0);
    for (std::size_t k = 0; k < half.size(); ++k) {
        b[k] = half[k];
        b[s - 1 - k] = -half[k];
    }
    return b;
}

// V(i, k) = b_k^i, i = 0..s-1
std::vector<std::vector<double>> power_rows(std::span<const double> nodes) {
    const std::size_t s = nodes.size();
    std::vector<std::vector<double>> V(s, std::vector<double>(s, 1.0));
    for (std::size_t i = 1; i < s; ++i)
        for (std::size_t k = 0; k < s; ++k) V[i][k] = V[i - 1][k] * nodes[k];
    return V;
}

void check_distinct(std::span<const double> nodes) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (nodes[i] == nodes[j]) throw SingularError("nodes are not pairwise distinct");
}

// Gaussian elimination with partial pivoting; solves for every column of rhs.
std::vector<std::vector<double>> solve(std::vector<std::vector<double>> V, std::vector<std::vector<double>> rhs) {
    const std::size_t n = V.size();
    const std::size_t m = rhs.empty() ? 0 : rhs[0].size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(V[r][c]) > std::fabs(V[p][c])) p = r;
        if (V[p][c] == 0.0) throw SingularError("singular Vandermonde matrix");
        std::swap(V[p], V[c]);
        std::swap(rhs[p], rhs[c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            double f = V[r][c] / V[c][c];
            if (f == 0.0) continue;
            for (std::size_t k = c; k < n; ++k) V[r][k] -= f * V[c][k];
            for (std::size_t k = 0; k < m; ++k) rhs[r][k] -= f * rhs[c][k];
        }
    }
    std::vector<std::vector<double>> x(n, std::vector<double>(m, 0.0));
    for (std::size_t c = n; c-- > 0;) {
        for (std::size_t k = 0; k < m; ++k) {
            double acc = rhs[c][k];
            for (std::size_t j = c + 1; j < n; ++j) acc -= V[c][j] * x[j][k];
            x[c][k] = acc / V[c][c];
        }
    }
    for (const auto& row : x)
        for (double v : row)
            if (!std::isfinite(v)) throw SingularError("Vandermonde solve produced non-finite values");
    return x;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

std::vector<double> make_nodes(NodeScheme scheme) {
    const int s = scheme.order;
    if (s < 2) throw ValidationError("node schemes need s >= 2");
    switch (scheme.kind) {
        case NodeKind::Chebyshev: {
            std::vector<double> half;
            for (int k = 1; 2 * k <= s; ++k) half.push_back(std::cos((k - 1) * std::numbers::pi / (s - 1)));
            return mirror(half, s);
        }
        case NodeKind::Equidistant: {
            std::vector<double> half;
            for (int k = 1; 2 * k <= s; ++k) half.push_back(1.0 - 2.0 * (k - 1) / (s - 1));
            return mirror(half, s);
        }
        case NodeKind::OptimalSymmetric:
            if (s > 6) throw UnsupportedError("optimal node sets are tabulated only for s <= 6");
            return mirror(kOptimalHalf[s], s);
    }
    throw ValidationError("bad node scheme");
}

NodeScheme default_scheme(int s) {
    return {s <= 6 ? NodeKind::OptimalSymmetric : NodeKind::Chebyshev, s};
}

LambdaCoeffs solve_lambda(std::span<const double> d, std::span<const double> nodes) {
    const std::size_t s = nodes.size();
    if (s < 1) throw ValidationError("solve_lambda: no nodes");
    if (d.size() != s + 1) throw ShapeError("solve_lambda: target must have s+1 entries");
    check_distinct(nodes);
    // row i: Σ_k λ_k b_k^i = d_{s-i} / C(s, s-i)
    std::vector<std::vector<double>> rhs(s, std::vector<double>(1));
    for (std::size_t i = 0; i < s; ++i) {
        int j = static_cast<int>(s - i);
        rhs[i][0] = d[s - j] / binom(static_cast<int>(s), j);
    }
    auto x = solve(power_rows(nodes), rhs);
    LambdaCoeffs lc;
    lc.nodes.assign(nodes.begin(), nodes.end());
    lc.target.assign(d.begin(), d.end());
    double l0 = d[s];
    for (std::size_t k = 0; k < s; ++k) {
        lc.lambda.push_back(x[k][0]);
        double bs = 1.0;
        for (std::size_t i = 0; i < s; ++i) bs *= nodes[k];
        l0 -= bs * x[k][0];
    }
    lc.lambda.push_back(l0);
    return lc;
}

double reconstruct(const LambdaCoeffs& lc, double x) {
    const int s = lc.order();
    double acc = lc.lambda0();
    for (int k = 0; k < s; ++k) {
        double t = x + lc.nodes[k], p = 1.0;
        for (int i = 0; i < s; ++i) p *= t;
        acc += lc.lambda[k] * p;
    }
    return acc;
}

double cond_inf(std::span<const double> nodes) {
    const std::size_t s = nodes.size();
    if (s < 1) throw ValidationError("cond_inf: no nodes");
    check_distinct(nodes);
    auto V = power_rows(nodes);
    std::vector<std::vector<double>> I(s, std::vector<double>(s, 0.0));
    for (std::size_t i = 0; i < s; ++i) I[i][i] = 1.0;
    auto Vinv = solve(V, I);
    auto norm = [](const std::vector<std::vector<double>>& M) {
        double best = 0.0;
        for (const auto& row : M) {
            double sum = 0.0;
            for (double v : row) sum += std::fabs(v);
            best = std::max(best, sum);
        }
        return best;
    };
    return norm(V) * norm(Vinv);
}

std::vector<CondRow> cond_sweep(const std::vector<NodeKind>& kinds, int max_s) {
    if (max_s < 2) throw ValidationError("cond sweep needs max s >= 2");
    std::vector<CondRow> rows;
    for (int s = 2; s <= max_s; ++s)
        for (NodeKind k : kinds) {
            if (k == NodeKind::OptimalSymmetric && s > 6) continue;
            rows.push_back({s, k, cond_inf(make_nodes({k, s}))});
        }
    return rows;
}

std::string cond_csv(const std::vector<CondRow>& rows) {
    std::ostringstream os;
    os << "s,scheme,cond_inf\n";
    for (const auto& r : rows) os << r.s << ',' << to_string(r.kind) << ',' << format_real(r.cond) << '\n';
    return os.str();
}

}  // namespace powernet
