#pragma once

namespace tcentroid {

/// Execution path for data-parallel kernels. `serial` is the reference
/// implementation; `parallel` must reproduce it bit for bit.
enum class Execution { serial, parallel };

/// Environment variable capping OpenMP threads used by parallel kernels.
inline constexpr const char* kThreadsEnvVar = "TRUNC_CENTROID_THREADS";

/// Threads a parallel kernel may use: the OpenMP default, capped by
/// TRUNC_CENTROID_THREADS when set. Throws ParameterError if the variable is
/// set to anything but an integer >= 1.
int thread_limit();

}  // namespace tcentroid
