#include "bignet/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace bignet {

int default_jobs() {
    const char* env = std::getenv("BIGNET_JOBS");
    if (!env || !*env) return 1;
    int v = 0;
    const char* end = env + std::strlen(env);
    const auto [p, ec] = std::from_chars(env, end, v);
    if (ec != std::errc{} || p != end || v < 1) return 1;
    return v;
}

}  // namespace bignet
