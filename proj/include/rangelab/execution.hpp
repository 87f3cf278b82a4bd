#pragma once

namespace rangelab {

/// Selects the serial reference or the OpenMP kernel. Both produce
/// bit-identical results; the serial path exists for testing and benchmarks.
enum class Execution { kSerial, kParallel };

/// Worker threads used by parallel kernels (OpenMP). 0 keeps the runtime default.
void set_worker_count(int workers);
int worker_count();

}  // namespace rangelab
