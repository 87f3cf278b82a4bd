#include "rangelab/execution.hpp"

#include <omp.h>

namespace rangelab {

void set_worker_count(int workers) {
  if (workers > 0) omp_set_num_threads(workers);
}

int worker_count() { return omp_get_max_threads(); }

}  // namespace rangelab
