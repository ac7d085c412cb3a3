#include <cstdlib>
#include <string_view>

#include "hybridk/kernels.hpp"

namespace hybridk::kernels {

const KernelTable& active() {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* forced = std::getenv("HYBRIDK_KERNELS");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_table();
    if (const KernelTable* avx2 = avx2_table()) return *avx2;
    return scalar_table();
  }();
  return table;
}

}  // namespace hybridk::kernels
