#include "tcentroid/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

#include "tcentroid/errors.hpp"

namespace tcentroid {

int thread_limit() {
    const int available = std::max(1, omp_get_max_threads());
    const char* raw = std::getenv(kThreadsEnvVar);
    if (raw == nullptr || *raw == '\0') {
        return available;
    }
    char* end = nullptr;
    const long cap = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || cap < 1 || cap > 1 << 20) {
        throw ParameterError(std::string(kThreadsEnvVar) + " must be an integer >= 1 (got '" + raw +
                             "')");
    }
    return static_cast<int>(std::min<long>(cap, available));
}

}  // namespace tcentroid
