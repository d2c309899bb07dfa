#pragma once

#include <algorithm>
#include <vector>

#ifdef SEGLAB_HAVE_OPENMP
#include <omp.h>
#endif

namespace seglab::kernels {

void set_num_threads(int n);  // n <= 0 keeps the runtime default
int max_threads();

// Deterministic parallel sum: [0,count) is split into a fixed number of
// chunks independent of the thread count; chunk partials are combined in
// index order, so the result is bit-identical for any number of threads.
inline constexpr int kReductionChunks = 256;

template <class F>
double parallel_sum(long count, F&& term) {
  if (count <= 0) return 0.0;
  const int nc = static_cast<int>(std::min<long>(kReductionChunks, count));
  std::vector<double> partial(nc, 0.0);
#ifdef SEGLAB_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int c = 0; c < nc; ++c) {
    const long lo = count * c / nc, hi = count * (c + 1) / nc;
    double s = 0.0;
    for (long k = lo; k < hi; ++k) s += term(k);
    partial[c] = s;
  }
  double total = 0.0;
  for (int c = 0; c < nc; ++c) total += partial[c];
  return total;
}

template <class F>
double serial_sum(long count, F&& term) {
  // Same chunked combination order as parallel_sum so both are bit-identical.
  if (count <= 0) return 0.0;
  const int nc = static_cast<int>(std::min<long>(kReductionChunks, count));
  double total = 0.0;
  for (int c = 0; c < nc; ++c) {
    const long lo = count * c / nc, hi = count * (c + 1) / nc;
    double s = 0.0;
    for (long k = lo; k < hi; ++k) s += term(k);
    total += s;
  }
  return total;
}

template <class F>
double parallel_max(long count, F&& term, double init) {
  double best = init;
#ifdef SEGLAB_HAVE_OPENMP
#pragma omp parallel
  {
    double local = init;
#pragma omp for schedule(static) nowait
    for (long k = 0; k < count; ++k) local = std::max(local, term(k));
#pragma omp critical
    best = std::max(best, local);
  }
#else
  for (long k = 0; k < count; ++k) best = std::max(best, term(k));
#endif
  return best;
}

template <class F>
double serial_max(long count, F&& term, double init) {
  double best = init;
  for (long k = 0; k < count; ++k) best = std::max(best, term(k));
  return best;
}

template <class F>
void parallel_for(long count, F&& body) {
#ifdef SEGLAB_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long k = 0; k < count; ++k) body(k);
}

}  // namespace seglab::kernels
