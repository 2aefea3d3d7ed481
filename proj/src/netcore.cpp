#include "powernet/netcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "powernet/error.hpp"

namespace powernet {

void check_power(int s) {
    if (s < 2) throw ValidationError("power s must be at least 2, got " + std::to_string(s));
    if (s > kMaxPower)
        throw ValidationError("power s is capped at " + std::to_string(kMaxPower) + ", got " +
                              std::to_string(s));
}

PowerNet::PowerNet(int power, std::size_t input_dim, std::vector<AffineLayer> layers)
    : power_(power), input_dim_(input_dim), layers_(std::move(layers)) {
    check_power(power_);
    if (input_dim_ < 1) throw ValidationError("input_dim must be at least 1");
    if (layers_.empty()) throw ValidationError("a net needs at least one layer");
    std::size_t cols = input_dim_;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        const auto& L = layers_[k];
        std::string where = "layer " + std::to_string(k) + ": ";
        if (L.A.rows() < 1 || L.A.cols() < 1) throw ShapeError(where + "empty weight matrix");
        if (L.A.cols() != cols)
            throw ShapeError(where + "expects " + std::to_string(L.A.cols()) + " inputs, previous width is " +
                             std::to_string(cols));
        if (L.b.size() != L.A.rows()) throw ShapeError(where + "bias length differs from row count");
        for (double v : L.A.data())
            if (!std::isfinite(v)) throw ValidationError(where + "non-finite weight");
        for (double v : L.b)
            if (!std::isfinite(v)) throw ValidationError(where + "non-finite bias");
        cols = L.A.rows();
    }
}

double repu(double x, int s) {
    if (!(x > 0.0)) return 0.0;
    double r = x;
    for (int i = 1; i < s; ++i) r *= x;
    return r;
}

std::vector<double> evaluate(const PowerNet& net, std::span<const double> x) {
    if (x.size() != net.input_dim())
        throw ShapeError("input has length " + std::to_string(x.size()) + ", net expects " +
                         std::to_string(net.input_dim()));
    for (double v : x)
        if (!std::isfinite(v)) throw ValidationError("non-finite input");
    std::vector<double> cur(x.begin(), x.end());
    const std::size_t L = net.depth();
    for (std::size_t k = 0; k < L; ++k) {
        const auto& layer = net.layer(k);
        std::vector<double> next = layer.A * std::span<const double>(cur);
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] += layer.b[i];
            if (k + 1 < L) next[i] = repu(next[i], net.power());
            if (!std::isfinite(next[i]))
                throw OverflowError("non-finite value in layer " + std::to_string(k));
        }
        cur = std::move(next);
    }
    return cur;
}

std::vector<double> evaluate(const PowerNet& net, std::initializer_list<double> x) {
    return evaluate(net, std::span<const double>(x.begin(), x.size()));
}

double evaluate_scalar(const PowerNet& net, double x) {
    if (net.output_dim() != 1) throw ShapeError("evaluate_scalar needs a scalar-output net");
    return evaluate(net, std::span<const double>(&x, 1))[0];
}

std::vector<std::vector<double>> evaluate_batch(const PowerNet& net,
                                                const std::vector<std::vector<double>>& points,
                                                unsigned threads) {
    std::vector<std::vector<double>> out(points.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, points.size() / 64 + 1));
    if (threads <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i) out[i] = evaluate(net, points[i]);
        return out;
    }
    // each worker owns a contiguous slice; the first exception wins
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    std::size_t chunk = (points.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            std::size_t lo = t * chunk, hi = std::min(points.size(), lo + chunk);
            try {
                for (std::size_t i = lo; i < hi; ++i) out[i] = evaluate(net, points[i]);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

NetStats stats(const PowerNet& net) {
    NetStats st;
    st.depth = net.depth();
    for (std::size_t k = 0; k < net.depth(); ++k) {
        const auto& L = net.layer(k);
        if (k + 1 < net.depth()) st.nodes += L.out_dim();
        for (double v : L.A.data()) st.nonzeros += (v != 0.0);
        for (double v : L.b) st.nonzeros += (v != 0.0);
    }
    return st;
}

std::size_t hidden_layers(const PowerNet& net) { return net.depth() - 1; }

PowerNet concat(const PowerNet& outer, const PowerNet& inner) {
    if (outer.power() != inner.power()) throw ValidationError("concat: power mismatch");
    if (outer.input_dim() != inner.output_dim())
        throw ShapeError("concat: outer expects " + std::to_string(outer.input_dim()) + " inputs, inner gives " +
                         std::to_string(inner.output_dim()));
    std::vector<AffineLayer> layers(inner.layers().begin(), inner.layers().end() - 1);
    const auto& last = inner.layers().back();
    const auto& first = outer.layer(0);
    AffineLayer junction{first.A * last.A, first.A * std::span<const double>(last.b)};
    for (std::size_t i = 0; i < junction.b.size(); ++i) junction.b[i] += first.b[i];
    layers.push_back(std::move(junction));
    layers.insert(layers.end(), outer.layers().begin() + 1, outer.layers().end());
    return PowerNet(outer.power(), inner.input_dim(), std::move(layers));
}

namespace {

std::vector<std::size_t> iota(std::size_t from, std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = from + i;
    return v;
}

void check_same_shape(const PowerNet& a, const PowerNet& b, const char* what) {
    if (a.power() != b.power()) throw ValidationError(std::string(what) + ": power mismatch");
    if (a.depth() != b.depth()) throw ShapeError(std::string(what) + ": depth mismatch");
}

}  // namespace

PowerNet assemble(std::size_t input_dim, std::size_t output_dim, const std::vector<Block>& blocks,
                  const std::vector<double>& output_bias) {
    if (blocks.empty()) throw ValidationError("assemble: no blocks");
    if (!output_bias.empty() && output_bias.size() != output_dim)
        throw ShapeError("assemble: output bias has wrong length");
    const int s = blocks.front().net.power();
    const std::size_t D = blocks.front().net.depth();
    for (const auto& blk : blocks) {
        check_same_shape(blocks.front().net, blk.net, "assemble");
        if (blk.inputs.size() != blk.net.input_dim()) throw ShapeError("assemble: input wiring length");
        if (blk.outputs.size() != blk.net.output_dim()) throw ShapeError("assemble: output wiring length");
        for (auto i : blk.inputs)
            if (i >= input_dim) throw ShapeError("assemble: input index out of range");
        for (auto o : blk.outputs)
            if (o >= output_dim) throw ShapeError("assemble: output index out of range");
    }
    std::vector<double> bias = output_bias.empty() ? std::vector<double>(output_dim, 0.0) : output_bias;

    if (D == 1) {
        Matrix A(output_dim, input_dim);
        for (const auto& blk : blocks) {
            const auto& L = blk.net.layer(0);
            for (std::size_t r = 0; r < L.out_dim(); ++r) {
                for (std::size_t c = 0; c < L.in_dim(); ++c) A(blk.outputs[r], blk.inputs[c]) += L.A(r, c);
                bias[blk.outputs[r]] += L.b[r];
            }
        }
        return PowerNet(s, input_dim, {AffineLayer{std::move(A), std::move(bias)}});
    }

    std::vector<AffineLayer> layers;
    // widths[k] = total rows of layer k across blocks
    std::vector<std::size_t> widths(D, 0);
    for (const auto& blk : blocks)
        for (std::size_t k = 0; k + 1 < D; ++k) widths[k] += blk.net.layer(k).out_dim();

    {
        Matrix A(widths[0], input_dim);
        std::vector<double> b(widths[0], 0.0);
        std::size_t off = 0;
        for (const auto& blk : blocks) {
            const auto& L = blk.net.layer(0);
            for (std::size_t r = 0; r < L.out_dim(); ++r) {
                for (std::size_t c = 0; c < L.in_dim(); ++c) A(off + r, blk.inputs[c]) += L.A(r, c);
                b[off + r] = L.b[r];
            }
            off += L.out_dim();
        }
        layers.push_back({std::move(A), std::move(b)});
    }
    for (std::size_t k = 1; k + 1 < D; ++k) {
        Matrix A(widths[k], widths[k - 1]);
        std::vector<double> b(widths[k], 0.0);
        std::size_t roff = 0, coff = 0;
        for (const auto& blk : blocks) {
            const auto& L = blk.net.layer(k);
            for (std::size_t r = 0; r < L.out_dim(); ++r) {
                for (std::size_t c = 0; c < L.in_dim(); ++c) A(roff + r, coff + c) = L.A(r, c);
                b[roff + r] = L.b[r];
            }
            roff += L.out_dim();
            coff += L.in_dim();
        }
        layers.push_back({std::move(A), std::move(b)});
    }
    {
        Matrix A(output_dim, widths[D - 2]);
        std::size_t coff = 0;
        for (const auto& blk : blocks) {
            const auto& L = blk.net.layer(D - 1);
            for (std::size_t r = 0; r < L.out_dim(); ++r) {
                for (std::size_t c = 0; c < L.in_dim(); ++c) A(blk.outputs[r], coff + c) += L.A(r, c);
                bias[blk.outputs[r]] += L.b[r];
            }
            coff += L.in_dim();
        }
        layers.push_back({std::move(A), std::move(bias)});
    }
    return PowerNet(s, input_dim, std::move(layers));
}

PowerNet parallel(const PowerNet& a, const PowerNet& b) {
    check_same_shape(a, b, "parallel");
    std::size_t in = std::max(a.input_dim(), b.input_dim());
    return assemble(in, a.output_dim() + b.output_dim(),
                    {{a, iota(0, a.input_dim()), iota(0, a.output_dim())},
                     {b, iota(0, b.input_dim()), iota(a.output_dim(), b.output_dim())}});
}

PowerNet tensor(const PowerNet& a, const PowerNet& b) {
    check_same_shape(a, b, "tensor");
    return assemble(a.input_dim() + b.input_dim(), a.output_dim() + b.output_dim(),
                    {{a, iota(0, a.input_dim()), iota(0, a.output_dim())},
                     {b, iota(a.input_dim(), b.input_dim()), iota(a.output_dim(), b.output_dim())}});
}

PowerNet shared_first_input_tensor(const std::vector<PowerNet>& subnets) {
    if (subnets.empty()) throw ValidationError("shared_first_input_tensor: empty list");
    if (subnets.size() == 1) return subnets.front();
    std::vector<Block> blocks;
    std::size_t in = 1, out = 0;
    for (const auto& net : subnets) {
        check_same_shape(subnets.front(), net, "shared_first_input_tensor");
        std::vector<std::size_t> inputs{0};
        for (std::size_t c = 1; c < net.input_dim(); ++c) inputs.push_back(in++);
        blocks.push_back({net, std::move(inputs), iota(out, net.output_dim())});
        out += net.output_dim();
    }
    return assemble(in, out, blocks);
}

PowerNet affine_net(int s, Matrix A, std::vector<double> b) {
    std::size_t in = A.cols();
    return PowerNet(s, in, {AffineLayer{std::move(A), std::move(b)}});
}

PowerNet identity_chain(int s, std::size_t width, std::size_t hidden) {
    check_power(s);
    if (width == 0) throw ValidationError("identity_chain: zero width");
    if (hidden == 0) {
        Matrix I(width, width);
        for (std::size_t i = 0; i < width; ++i) I(i, i) = 1.0;
        return affine_net(s, std::move(I), std::vector<double>(width, 0.0));
    }
    PowerNet id = identity_net(s);
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < width; ++i) blocks.push_back({id, {i}, {i}});
    PowerNet one = assemble(width, width, blocks);
    PowerNet chain = one;
    for (std::size_t h = 1; h < hidden; ++h) chain = concat(one, chain);
    return chain;
}

PowerNet delay(const PowerNet& net, std::size_t extra) {
    if (extra == 0) return net;
    return concat(identity_chain(net.power(), net.output_dim(), extra), net);
}

PowerNet widen_input(const PowerNet& net, std::size_t dim) {
    if (dim < net.input_dim()) throw ShapeError("widen_input: cannot shrink input");
    if (dim == net.input_dim()) return net;
    std::vector<AffineLayer> layers = net.layers();
    Matrix A(layers[0].A.rows(), dim);
    for (std::size_t r = 0; r < A.rows(); ++r)
        for (std::size_t c = 0; c < net.input_dim(); ++c) A(r, c) = layers[0].A(r, c);
    layers[0].A = std::move(A);
    return PowerNet(net.power(), dim, std::move(layers));
}

// ---- JSON ----

std::string serialize(const PowerNet& net) {
    nlohmann::ordered_json doc;
    doc["power"] = net.power();
    doc["input_dim"] = net.input_dim();
    auto layers = nlohmann::ordered_json::array();
    for (const auto& L : net.layers()) {
        auto A = nlohmann::ordered_json::array();
        for (std::size_t r = 0; r < L.A.rows(); ++r) {
            auto row = L.A.row(r);
            A.push_back(std::vector<double>(row.begin(), row.end()));
        }
        nlohmann::ordered_json layer;
        layer["A"] = std::move(A);
        layer["b"] = L.b;
        layers.push_back(std::move(layer));
    }
    doc["layers"] = std::move(layers);
    return doc.dump() + "\n";
}

namespace {

using json = nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + ": missing field \"" + key + "\"");
    return *it;
}

double real_at(const json& v, const std::string& path) {
    if (!v.is_number()) throw ParseError(path + ": expected a number");
    return v.get<double>();
}

std::vector<double> reals_at(const json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path + ": expected an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(real_at(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

long long int_at(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ParseError(path + ": expected an integer");
    return v.get<long long>();
}

}  // namespace

PowerNet deserialize(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    long long power = int_at(field(doc, "power", "$"), "$.power");
    long long dim = int_at(field(doc, "input_dim", "$"), "$.input_dim");
    if (dim < 1) throw ValidationError("$.input_dim: must be at least 1");
    if (power < 2 || power > kMaxPower) throw ValidationError("$.power: out of range");
    const json& jl = field(doc, "layers", "$");
    if (!jl.is_array()) throw ParseError("$.layers: expected an array");
    std::vector<AffineLayer> layers;
    for (std::size_t k = 0; k < jl.size(); ++k) {
        std::string path = "$.layers[" + std::to_string(k) + "]";
        const json& ja = field(jl[k], "A", path);
        if (!ja.is_array() || ja.empty()) throw ParseError(path + ".A: expected a non-empty array of rows");
        std::vector<std::vector<double>> rows;
        for (std::size_t r = 0; r < ja.size(); ++r)
            rows.push_back(reals_at(ja[r], path + ".A[" + std::to_string(r) + "]"));
        for (const auto& row : rows)
            if (row.size() != rows.front().size()) throw ValidationError(path + ".A: ragged rows");
        layers.push_back({Matrix::from_rows(rows), reals_at(field(jl[k], "b", path), path + ".b")});
    }
    return PowerNet(static_cast<int>(power), static_cast<std::size_t>(dim), std::move(layers));
}

}  // namespace powernet
