#pragma once

#include "countrank/kernels.hpp"

namespace countrank::kernels::detail {

extern const KernelTable scalar_table;
// Only valid on CPUs with AVX2 and FMA; has_avx2_table is false when the
// compiler could not build the variant (non-x86 targets).
extern const KernelTable avx2_table;
extern const bool has_avx2_table;

}  // namespace countrank::kernels::detail
