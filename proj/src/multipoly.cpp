#include "powernet/multipoly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include <json.hpp>

#include "powernet/error.hpp"
#include "powernet/monomial.hpp"
#include "powernet/poly1d.hpp"
#include "stages.hpp"

namespace powernet {

MultiIndex::MultiIndex(std::vector<int> e) : exponents(std::move(e)) {
    for (int v : exponents)
        if (v < 0) throw ValidationError("multi-index exponents must be non-negative");
}

int MultiIndex::total_degree() const {
    int t = 0;
    for (int v : exponents) t += v;
    return t;
}

MultiIndexSet::MultiIndexSet(int dim, std::vector<MultiIndex> indices) : dim_(dim), indices_(std::move(indices)) {
    if (dim_ < 1) throw ValidationError("index set dimension must be at least 1");
    for (const auto& k : indices_)
        if (k.dim() != dim_) throw ShapeError("multi-index dimension differs from set dimension");
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
        throw ValidationError("duplicate multi-index in set");
}

MultiIndexSet::MultiIndexSet(int dim, std::vector<MultiIndex> sorted, SetKind kind, int param)
    : dim_(dim), indices_(std::move(sorted)), kind_(kind), param_(param) {}

bool MultiIndexSet::contains(const MultiIndex& k) const {
    return std::binary_search(indices_.begin(), indices_.end(), k);
}

int MultiIndexSet::max_degree(int i) const {
    int m = 0;
    for (const auto& k : indices_) m = std::max(m, k[i]);
    return m;
}

namespace {

// enumerate every index with coordinates in [0, cap] accepted by keep(prefix)
std::vector<MultiIndex> enumerate(int d, int cap, const std::function<bool(const std::vector<int>&)>& keep) {
    std::vector<MultiIndex> out;
    std::vector<int> cur;
    std::function<void()> rec = [&] {
        if (static_cast<int>(cur.size()) == d) {
            out.emplace_back(cur);
            return;
        }
        for (int v = 0; v <= cap; ++v) {
            cur.push_back(v);
            bool ok = keep(cur);
            if (ok) rec();
            cur.pop_back();
            if (!ok) break;  // every filter is monotone in the last coordinate
        }
    };
    rec();
    std::sort(out.begin(), out.end());
    return out;
}

void check_set_args(int n, int d) {
    if (n < 0) throw ValidationError("index set degree must be non-negative");
    if (d < 1) throw ValidationError("index set dimension must be at least 1");
}

}  // namespace

MultiIndexSet total_degree_set(int n, int d) {
    check_set_args(n, d);
    auto idx = enumerate(d, n, [n](const std::vector<int>& k) {
        int t = 0;
        for (int v : k) t += v;
        return t <= n;
    });
    return MultiIndexSet(d, std::move(idx), SetKind::TotalDegree, n);
}

MultiIndexSet tensor_set(int N, int d) {
    check_set_args(N, d);
    auto idx = enumerate(d, N, [](const std::vector<int>&) { return true; });
    return MultiIndexSet(d, std::move(idx), SetKind::Tensor, N);
}

MultiIndexSet hyperbolic_set(int N, int d) {
    check_set_args(N, d);
    std::vector<MultiIndex> idx;
    if (N >= 1) {
        idx = enumerate(d, N, [N](const std::vector<int>& k) {
            long long p = 1;
            for (int v : k) p *= std::max(1, v);
            return p <= N;
        });
    }
    return MultiIndexSet(d, std::move(idx), SetKind::HyperbolicCross, N);
}

bool is_complete(const MultiIndexSet& set) {
    // checking the immediate predecessors of every member is enough
    for (const auto& k : set.indices())
        for (int i = 0; i < k.dim(); ++i) {
            if (k[i] == 0) continue;
            MultiIndex p = k;
            --p.exponents[i];
            if (!set.contains(p)) return false;
        }
    return true;
}

MultiIndexSet downward_closure(const MultiIndexSet& set) {
    std::set<MultiIndex> seen(set.indices().begin(), set.indices().end());
    std::vector<MultiIndex> stack(set.indices().begin(), set.indices().end());
    while (!stack.empty()) {
        MultiIndex k = std::move(stack.back());
        stack.pop_back();
        for (int i = 0; i < k.dim(); ++i) {
            if (k[i] == 0) continue;
            MultiIndex p = k;
            --p.exponents[i];
            if (seen.insert(p).second) stack.push_back(p);
        }
    }
    return MultiIndexSet(set.dim(), std::vector<MultiIndex>(seen.begin(), seen.end()));
}

namespace {

std::vector<MultiIndex> keys_of(const std::map<MultiIndex, double>& terms) {
    std::vector<MultiIndex> keys;
    for (const auto& [k, a] : terms) keys.push_back(k);
    return keys;
}

}  // namespace

MultiPoly::MultiPoly(int dim, std::map<MultiIndex, double> terms)
    : MultiPoly(dim, terms, MultiIndexSet(dim, keys_of(terms))) {}

MultiPoly::MultiPoly(int dim, std::map<MultiIndex, double> terms, MultiIndexSet support)
    : dim_(dim), terms_(std::move(terms)), support_(std::move(support)) {
    if (dim_ < 1) throw ValidationError("polynomial dimension must be at least 1");
    if (support_.dim() != dim_) throw ShapeError("support dimension differs from polynomial dimension");
    for (const auto& [k, a] : terms_) {
        if (k.dim() != dim_) throw ShapeError("term dimension differs from polynomial dimension");
        if (!std::isfinite(a)) throw ValidationError("non-finite coefficient");
        if (!support_.contains(k)) throw ValidationError("term lies outside the support");
    }
}

double MultiPoly::coeff(const MultiIndex& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? 0.0 : it->second;
}

double MultiPoly::l1_norm() const {
    double t = 0.0;
    for (const auto& [k, a] : terms_) t += std::fabs(a);
    return t;
}

MultiPoly complete_support(const MultiPoly& f) {
    return MultiPoly(f.dim(), f.terms(), downward_closure(f.support()));
}

double mpoly_eval(const MultiPoly& f, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(f.dim()))
        throw ShapeError("point has length " + std::to_string(x.size()) + ", polynomial has dimension " +
                         std::to_string(f.dim()));
    // Neumaier summation over the terms
    double sum = 0.0, comp = 0.0;
    for (const auto& [k, a] : f.terms()) {
        double t = a;
        for (int i = 0; i < f.dim(); ++i)
            for (int e = 0; e < k[i]; ++e) t *= x[i];
        double u = sum + t;
        if (std::fabs(sum) >= std::fabs(t))
            comp += (sum - u) + t;
        else
            comp += (t - u) + sum;
        sum = u;
    }
    return sum + comp;
}

namespace {

// polynomial in the first `dim` variables during the recursive build
struct Slice {
    int dim;
    std::map<std::vector<int>, double> terms;
    std::set<std::vector<int>> support;
};

PowerNet build(const Slice& f, int s);

PowerNet affine_from(const Slice& f, int s) {
    Matrix A(1, f.dim);
    std::vector<double> b{0.0};
    for (const auto& [k, a] : f.terms) {
        int i = static_cast<int>(std::find(k.begin(), k.end(), 1) - k.begin());
        if (i == f.dim)
            b[0] = a;
        else
            A(0, i) = a;
    }
    return affine_net(s, std::move(A), std::move(b));
}

Slice slice_at(const Slice& f, int j) {
    Slice out{f.dim - 1, {}, {}};
    for (const auto& k : f.support)
        if (k.back() == j) out.support.insert(std::vector<int>(k.begin(), k.end() - 1));
    for (const auto& [k, a] : f.terms)
        if (k.back() == j) out.terms[std::vector<int>(k.begin(), k.end() - 1)] = a;
    return out;
}

PowerNet build(const Slice& f, int s) {
    int total = 0, top = 0;
    for (const auto& k : f.support) {
        int t = 0;
        for (int v : k) t += v;
        total = std::max(total, t);
        top = std::max(top, k.back());
    }
    if (total <= 1) return affine_from(f, s);
    if (f.dim == 1) {
        std::vector<double> c(top + 1, 0.0);
        for (const auto& [k, a] : f.terms) c[k[0]] = a;
        return optimal_poly_net(PolyCoeffs(std::move(c)), s);
    }
    const int D = f.dim;
    const int N = top;
    if (N == 0) return widen_input(build(slice_at(f, 0), s), D);

    std::vector<PowerNet> coef;
    std::size_t lmax = 0;
    for (int j = 0; j <= N; ++j) {
        coef.push_back(build(slice_at(f, j), s));
        lmax = std::max(lmax, hidden_layers(coef.back()));
    }
    std::vector<std::size_t> inner(D - 1);
    for (int i = 0; i < D - 1; ++i) inner[i] = i;
    const std::size_t t = D - 1;
    int count = N + 1;

    if (lmax == 0) {
        // every coefficient is affine: fold them into the first layer,
        // then reduce with pm blocks on the powers of x_D
        Matrix A(1 + count, D);
        std::vector<double> b(1 + count, 0.0);
        A(0, t) = 1.0;
        for (int j = 0; j < count; ++j) {
            const auto& L = coef[j].layer(0);
            for (int i = 0; i < D - 1; ++i) A(1 + j, i) = L.A(0, i);
            b[1 + j] = L.b[0];
        }
        PowerNet net = affine_net(s, std::move(A), std::move(b));
        while (count > 1) {
            const bool more = detail::reductions(count, s) > 1;
            net = concat(detail::pm_stage(s, count, more, &count), net);
        }
        return net;
    }

    // x_D is carried to one layer short of the coefficients, then its
    // powers x_D^s, x_D^1..x_D^{s-1} land on the same level as them
    std::vector<std::vector<double>> powers;
    for (int j = 1; j < s; ++j) {
        std::vector<double> c(j + 1, 0.0);
        c[j] = 1.0;
        powers.push_back(std::move(c));
    }
    std::vector<std::size_t> pouts;
    for (int j = 1; j < s; ++j) pouts.push_back(j);
    PowerNet tower = assemble(1, s, {{power_s_net(s), {0}, {0}}, {shallow_combination_net(s, powers), {0}, pouts}});
    tower = concat(tower, identity_chain(s, 1, lmax - 1));

    std::vector<Block> blocks;
    blocks.push_back({tower, {t}, [&] {
                          std::vector<std::size_t> o(s);
                          for (int i = 0; i < s; ++i) o[i] = i;
                          return o;
                      }()});
    for (int j = 0; j < count; ++j)
        blocks.push_back({delay(coef[j], lmax - hidden_layers(coef[j])), inner, {static_cast<std::size_t>(s + j)}});
    PowerNet net = assemble(D, s + count, blocks);

    const int after = detail::reductions(detail::reduce_groups(count, s, true), s);
    net = concat(detail::reduce_stage(s, count, true, after >= 2, after >= 1, true, &count), net);
    while (count > 1) {
        const int r = detail::reductions(count, s);
        net = concat(detail::reduce_stage(s, count, r >= 2, r >= 3, r >= 2, false, &count), net);
    }
    return net;
}

}  // namespace

PowerNet mpoly_net(const MultiPoly& f, int s) {
    check_power(s);
    if (!is_complete(f.support()))
        throw CompletenessError("support is not downward closed; complete it first");
    if (f.support().empty()) return affine_net(s, Matrix(1, f.dim()), {0.0});
    if (f.dim() == 1) {
        std::vector<double> c(f.support().max_degree(0) + 1, 0.0);
        for (const auto& [k, a] : f.terms()) c[k[0]] = a;
        return optimal_poly_net(PolyCoeffs(std::move(c)), s);
    }
    Slice top{f.dim(), {}, {}};
    for (const auto& k : f.support().indices()) top.support.insert(k.exponents);
    for (const auto& [k, a] : f.terms()) top.terms[k.exponents] = a;
    return build(top, s);
}

MultiPoly parse_mpoly(const std::string& text) {
    using json = nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("$: expected an object");
    if (!doc.contains("dim") || !doc["dim"].is_number_integer()) throw ParseError("$.dim: expected an integer");
    if (!doc.contains("terms") || !doc["terms"].is_array()) throw ParseError("$.terms: expected an array");
    const int dim = doc["dim"].get<int>();
    if (dim < 1) throw ValidationError("$.dim: must be at least 1");
    std::map<MultiIndex, double> terms;
    const json& jt = doc["terms"];
    for (std::size_t i = 0; i < jt.size(); ++i) {
        std::string path = "$.terms[" + std::to_string(i) + "]";
        const json& t = jt[i];
        if (!t.is_object() || !t.contains("k") || !t.contains("a")) throw ParseError(path + ": expected {k, a}");
        if (!t["k"].is_array()) throw ParseError(path + ".k: expected an array");
        std::vector<int> k;
        for (const auto& v : t["k"]) {
            if (!v.is_number_integer()) throw ParseError(path + ".k: expected integers");
            k.push_back(v.get<int>());
        }
        if (static_cast<int>(k.size()) != dim) throw ValidationError(path + ".k: length differs from dim");
        if (!t["a"].is_number()) throw ParseError(path + ".a: expected a number");
        if (!terms.emplace(MultiIndex(k), t["a"].get<double>()).second)
            throw ValidationError(path + ": repeated multi-index");
    }
    return MultiPoly(dim, std::move(terms));
}

std::string serialize_mpoly(const MultiPoly& f) {
    nlohmann::ordered_json doc;
    doc["dim"] = f.dim();
    auto terms = nlohmann::ordered_json::array();
    for (const auto& [k, a] : f.terms()) {
        nlohmann::ordered_json t;
        t["k"] = k.exponents;
        t["a"] = a;
        terms.push_back(std::move(t));
    }
    doc["terms"] = std::move(terms);
    return doc.dump() + "\n";
}

}  // namespace powernet
