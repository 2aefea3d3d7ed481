#pragma once

#include <span>
#include <string>
#include <vector>

namespace powernet {

enum class NodeKind { Chebyshev, Equidistant, OptimalSymmetric };

struct NodeScheme {
    NodeKind kind = NodeKind::Chebyshev;
    int order = 2;
};

// lambda = (λ_1..λ_s, λ_0); target d is stored highest degree first (d_s..d_0)
struct LambdaCoeffs {
    std::vector<double> lambda;
    std::vector<double> nodes;
    std::vector<double> target;

    int order() const { return static_cast<int>(nodes.size()); }
    double lambda0() const { return lambda.back(); }
};

std::string to_string(NodeKind kind);
NodeKind parse_node_kind(const std::string& name);

std::vector<double> make_nodes(NodeScheme scheme);
// optimal up to 6, Chebyshev beyond
NodeScheme default_scheme(int s);

LambdaCoeffs solve_lambda(std::span<const double> d, std::span<const double> nodes);
// λ_0 + Σ λ_k (x + b_k)^s, evaluated directly
double reconstruct(const LambdaCoeffs& lc, double x);

double cond_inf(std::span<const double> nodes);

struct CondRow {
    int s;
    NodeKind kind;
    double cond;
};

// optimal rows only exist for s <= 6
std::vector<CondRow> cond_sweep(const std::vector<NodeKind>& kinds, int max_s);
std::string cond_csv(const std::vector<CondRow>& rows);

}  // namespace powernet
