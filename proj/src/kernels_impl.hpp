#pragma once

#include "qwalk/kernels.hpp"

namespace qwalk::kernels::detail {

#if defined(QWALK_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace qwalk::kernels::detail
