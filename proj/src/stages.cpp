#include "stages.hpp"

#include <algorithm>

#include "powernet/bivariate.hpp"
#include "powernet/error.hpp"
#include "powernet/monomial.hpp"

namespace powernet::detail {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

int reductions(int count, int s) {
    int r = 0;
    while (count > 1) {
        count = ceil_div(count, s);
        ++r;
    }
    return r;
}

int reduce_groups(int count, int s, bool wide_last) {
    if (wide_last) return std::max(1, ceil_div(count - 1, s));
    return ceil_div(count, s);
}

PowerNet reduce_stage(int s, int count, bool has_base, bool emit_base, bool emit_powers, bool wide_last,
                      int* out_count) {
    if (count < 1) throw ValidationError("reduce_stage: nothing to reduce");
    if (!has_base && (emit_base || emit_powers || wide_last))
        throw ValidationError("reduce_stage: base input required");
    const int groups = reduce_groups(count, s, wide_last);
    const std::size_t qoff = has_base ? 1 : 0, voff = qoff + static_cast<std::size_t>(s - 1);
    const std::size_t in_dim = voff + count;
    std::size_t out = 0;
    std::vector<Block> blocks;
    if (emit_base) blocks.push_back({power_s_net(s), {0}, {out++}});
    if (emit_powers) {
        std::vector<std::vector<double>> powers;
        std::vector<std::size_t> outs;
        for (int j = 1; j < s; ++j) {
            std::vector<double> c(j + 1, 0.0);
            c[j] = 1.0;
            powers.push_back(std::move(c));
            outs.push_back(out++);
        }
        blocks.push_back({shallow_combination_net(s, powers), {0}, outs});
    }
    const PowerNet id = identity_net(s);
    const PowerNet prod = xny_net(1, s);
    for (int k = 0; k < groups; ++k) {
        const std::size_t o = out++;
        const int first = k * s;
        const int last = (wide_last && k == groups - 1) ? std::min(count - 1, first + s)
                                                          : std::min(count - 1, first + s - 1);
        blocks.push_back({id, {voff + first}, {o}});
        for (int j = 1; first + j <= last; ++j) {
            std::size_t mult = j < s ? qoff + (j - 1) : 0;
            blocks.push_back({prod, {mult, voff + first + j}, {o}});
        }
    }
    if (out_count) *out_count = groups;
    return assemble(in_dim, out, blocks);
}

PowerNet pm_stage(int s, int count, bool emit_base, int* out_count) {
    if (count < 1) throw ValidationError("pm_stage: nothing to reduce");
    const int groups = ceil_div(count, s);
    std::vector<PowerNet> pms;
    for (int k = 0; k < groups; ++k) pms.push_back(pm_net(s, std::min(s, count - k * s)));
    PowerNet shared = shared_first_input_tensor(pms);
    if (out_count) *out_count = groups;
    if (!emit_base) return shared;
    return parallel(power_s_net(s), shared);
}

}  // namespace powernet::detail
