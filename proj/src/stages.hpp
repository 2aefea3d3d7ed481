#pragma once

#include "powernet/netcore.hpp"

namespace powernet::detail {

// number of s-fold reductions needed to collapse `count` values to one
int reductions(int count, int s);

// Product-kernel reduction.
// in:  [base b if has_base] [q_1..q_{s-1}] [v_0..v_{count-1}]
// out: [b^s if emit_base] [b^1..b^{s-1} if emit_powers] [w_k]
// w_k = v_{ks} + Σ_j q_j v_{ks+j}; with wide_last the final group also
// takes b * v_{ks+s}, so it spans s+1 values.
PowerNet reduce_stage(int s, int count, bool has_base, bool emit_base, bool emit_powers, bool wide_last,
                      int* out_count);
int reduce_groups(int count, int s, bool wide_last);

// pm-kernel reduction.
// in:  [b] [v_0..v_{count-1}]
// out: [b^s if emit_base] [w_k = Σ_{j<s} b^j v_{ks+j}]
PowerNet pm_stage(int s, int count, bool emit_base, int* out_count);

}  // namespace powernet::detail
