#pragma once

#include <string>
#include <vector>

#include "powernet/netcore.hpp"

namespace powernet {

// a_0..a_n, ascending; trailing zeros allowed
class PolyCoeffs {
public:
    PolyCoeffs() : coeffs_{0.0} {}
    explicit PolyCoeffs(std::vector<double> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    double operator[](std::size_t i) const { return coeffs_[i]; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double l1_norm() const;

private:
    std::vector<double> coeffs_;
};

enum class Strategy { Shallow, Horner, Recursive, Optimal, Auto };

std::string to_string(Strategy st);
Strategy parse_strategy(const std::string& name);

double horner_eval(const PolyCoeffs& p, double x);

PowerNet shallow_poly_net(const PolyCoeffs& p, int s);
PowerNet horner_net(const PolyCoeffs& p, int s);
PowerNet recursive_poly_net(const PolyCoeffs& p, int s);
PowerNet optimal_poly_net(const PolyCoeffs& p, int s);
PowerNet build_poly_net(const PolyCoeffs& p, int s, Strategy strategy);

// JSON array or one coefficient per line
PolyCoeffs parse_coeffs(const std::string& text);

}  // namespace powernet
