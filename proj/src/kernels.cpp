#include "seglab/kernels.hpp"

namespace seglab::kernels {

void set_num_threads(int n) {
#ifdef SEGLAB_HAVE_OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef SEGLAB_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace seglab::kernels
