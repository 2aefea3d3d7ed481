#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "powernet/multipoly.hpp"
#include "powernet/netcore.hpp"
#include "powernet/poly1d.hpp"

namespace powernet {

using Function1d = std::function<double(double)>;
using FunctionNd = std::function<double(std::span<const double>)>;

inline constexpr int kMaxConversionDegree = 64;
inline constexpr int kMaxHyperbolicDegree = 32;

struct QuadratureRule {
    std::vector<double> nodes;  // ascending
    std::vector<double> weights;
};

struct LegendreExpansion {
    std::vector<double> coeffs;  // c_0..c_N on P_0..P_N

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

struct ErrorReport {
    double l2_error = 0.0;
    double linf_error = 0.0;
    int n_samples = 0;
    int degree = 0;
    // max |net - projection| relative to max(1, max |projection|)
    double fidelity = 0.0;
};

struct Approximation {
    PowerNet net;
    ErrorReport report;
};

QuadratureRule gauss_legendre(int nq);

// P_0(x)..P_N(x)
std::vector<double> legendre_values(int N, double x);
double legendre_eval(const LegendreExpansion& e, double x);

LegendreExpansion project_legendre(const Function1d& f, int N, int nq);
PolyCoeffs legendre_to_monomial(const LegendreExpansion& e);
LegendreExpansion monomial_to_legendre(const PolyCoeffs& p);

// quadrature points per dimension used by the approximation drivers
int default_quadrature_points(int N);

Approximation approximate_net_1d(const Function1d& f, int N, int s);

std::map<MultiIndex, double> project_hyperbolic_legendre(const FunctionNd& f, int N, int d, int nq);
MultiPoly project_hyperbolic(const FunctionNd& f, int N, int d, int nq);
Approximation approximate_net_md(const FunctionNd& f, int N, int d, int s);

std::vector<double> equispaced_grid(int n);
// Halton sequence mapped to [-1,1]^d, starting at index 1
std::vector<std::vector<double>> halton_points(int n, int d);

enum class RateKind { Exact, Algebraic, Exponential, Undetermined };
std::string to_string(RateKind kind);

struct SweepRow {
    int N;
    double l2;
    double linf;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    RateKind kind = RateKind::Undetermined;
    double slope = 0.0;     // of the chosen fit, natural log of the L2 error
    double r2_algebraic = 0.0;
    double r2_exponential = 0.0;
    std::size_t fitted_points = 0;
};

SweepResult convergence_sweep(const FunctionNd& f, const std::vector<int>& Ns, int s, int d);
std::string sweep_csv(const SweepResult& r);

// exp, sin, runge, absx3 (applied to the coordinate sum / squared norm)
FunctionNd builtin_function(const std::string& name, int d);

}  // namespace powernet
