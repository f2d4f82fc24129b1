#include "lipexp/common.hpp"

#include <cstdlib>

namespace lipexp {

std::size_t worker_count() {
    static std::size_t cached = [] {
        if (const char* env = std::getenv("LIPEXP_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v >= 1) return std::size_t(v);
        }
        unsigned hw = std::thread::hardware_concurrency();
        return std::size_t(hw == 0 ? 1 : hw);
    }();
    return cached;
}

}  // namespace lipexp
