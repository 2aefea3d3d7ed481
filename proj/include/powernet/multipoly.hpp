#pragma once

#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "powernet/netcore.hpp"

namespace powernet {

struct MultiIndex {
    std::vector<int> exponents;

    MultiIndex() = default;
    MultiIndex(std::vector<int> e);
    MultiIndex(std::initializer_list<int> e) : MultiIndex(std::vector<int>(e)) {}

    int dim() const { return static_cast<int>(exponents.size()); }
    int operator[](std::size_t i) const { return exponents[i]; }
    int total_degree() const;
    auto operator<=>(const MultiIndex&) const = default;
};

enum class SetKind { TotalDegree, Tensor, HyperbolicCross, Custom };

class MultiIndexSet {
public:
    // Custom set; rejects duplicates and mixed dimensions
    MultiIndexSet(int dim, std::vector<MultiIndex> indices);

    int dim() const { return dim_; }
    SetKind kind() const { return kind_; }
    int parameter() const { return param_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    const std::vector<MultiIndex>& indices() const& { return indices_; }
    // safe in range-for over a temporary set
    std::vector<MultiIndex> indices() && { return std::move(indices_); }
    bool contains(const MultiIndex& k) const;
    // largest exponent of coordinate i over the set (0 when empty)
    int max_degree(int i) const;

    friend MultiIndexSet total_degree_set(int n, int d);
    friend MultiIndexSet tensor_set(int N, int d);
    friend MultiIndexSet hyperbolic_set(int N, int d);

private:
    MultiIndexSet(int dim, std::vector<MultiIndex> sorted, SetKind kind, int param);

    int dim_;
    std::vector<MultiIndex> indices_;  // sorted, unique
    SetKind kind_ = SetKind::Custom;
    int param_ = 0;
};

MultiIndexSet total_degree_set(int n, int d);
MultiIndexSet tensor_set(int N, int d);
MultiIndexSet hyperbolic_set(int N, int d);

bool is_complete(const MultiIndexSet& set);
MultiIndexSet downward_closure(const MultiIndexSet& set);

class MultiPoly {
public:
    // support defaults to the indices of the given terms
    MultiPoly(int dim, std::map<MultiIndex, double> terms);
    MultiPoly(int dim, std::map<MultiIndex, double> terms, MultiIndexSet support);

    int dim() const { return dim_; }
    const std::map<MultiIndex, double>& terms() const { return terms_; }
    const MultiIndexSet& support() const { return support_; }
    double coeff(const MultiIndex& k) const;
    double l1_norm() const;

private:
    int dim_;
    std::map<MultiIndex, double> terms_;
    MultiIndexSet support_;
};

// same terms, support closed downward
MultiPoly complete_support(const MultiPoly& f);

double mpoly_eval(const MultiPoly& f, std::span<const double> x);
PowerNet mpoly_net(const MultiPoly& f, int s);

MultiPoly parse_mpoly(const std::string& text);
std::string serialize_mpoly(const MultiPoly& f);

}  // namespace powernet
