#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "powernet/matrix.hpp"

namespace powernet {

inline constexpr int kMaxPower = 12;

struct AffineLayer {
    Matrix A;
    std::vector<double> b;

    std::size_t out_dim() const { return A.rows(); }
    std::size_t in_dim() const { return A.cols(); }
    bool operator==(const AffineLayer&) const = default;
};

// Immutable after construction; the constructor checks every invariant.
class PowerNet {
public:
    PowerNet(int power, std::size_t input_dim, std::vector<AffineLayer> layers);

    int power() const { return power_; }
    std::size_t input_dim() const { return input_dim_; }
    std::size_t output_dim() const { return layers_.back().out_dim(); }
    std::size_t depth() const { return layers_.size(); }
    const std::vector<AffineLayer>& layers() const& { return layers_; }
    std::vector<AffineLayer> layers() && { return std::move(layers_); }
    const AffineLayer& layer(std::size_t k) const { return layers_[k]; }

    bool operator==(const PowerNet&) const = default;

private:
    int power_;
    std::size_t input_dim_;
    std::vector<AffineLayer> layers_;
};

struct NetStats {
    std::size_t depth = 0;
    std::size_t nodes = 0;
    std::size_t nonzeros = 0;
};

void check_power(int s);

double repu(double x, int s);

std::vector<double> evaluate(const PowerNet& net, std::span<const double> x);
std::vector<double> evaluate(const PowerNet& net, std::initializer_list<double> x);
double evaluate_scalar(const PowerNet& net, double x);

// Points are evaluated independently; threads == 0 picks hardware concurrency.
std::vector<std::vector<double>> evaluate_batch(const PowerNet& net,
                                                const std::vector<std::vector<double>>& points,
                                                unsigned threads = 0);

NetStats stats(const PowerNet& net);
std::size_t hidden_layers(const PowerNet& net);

PowerNet concat(const PowerNet& outer, const PowerNet& inner);
PowerNet parallel(const PowerNet& a, const PowerNet& b);
PowerNet tensor(const PowerNet& a, const PowerNet& b);
PowerNet shared_first_input_tensor(const std::vector<PowerNet>& subnets);

PowerNet identity_net(int s);
PowerNet affine_net(int s, Matrix A, std::vector<double> b);
// width copies of the identity, composed `hidden` times: depth hidden+1
PowerNet identity_chain(int s, std::size_t width, std::size_t hidden);
// pushes the outputs of `net` through `extra` more hidden layers
PowerNet delay(const PowerNet& net, std::size_t extra);
// same realization, input padded with unused coordinates up to `dim`
PowerNet widen_input(const PowerNet& net, std::size_t dim);

// Block of a wired assembly: a subnet reading inputs[] of the assembly
// input and adding its outputs into outputs[] of the assembly output.
struct Block {
    PowerNet net;
    std::vector<std::size_t> inputs;
    std::vector<std::size_t> outputs;
};

// Tensor of all blocks, with 0/1 selection in front and a summing gather
// behind, folded into the first and last layers. All blocks share a depth.
PowerNet assemble(std::size_t input_dim, std::size_t output_dim, const std::vector<Block>& blocks,
                  const std::vector<double>& output_bias = {});

std::string serialize(const PowerNet& net);
PowerNet deserialize(const std::string& text);

}  // namespace powernet
