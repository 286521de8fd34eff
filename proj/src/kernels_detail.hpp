#pragma once

#include <cstddef>

namespace fracsde::kernels::detail {

struct Vtable {
    void (*powlaw)(const double*, std::size_t, std::size_t, double, double, double*);
    void (*decay_update)(double*, const double*, const double*, const double*,
                         std::size_t, std::size_t);
    void (*term_sum)(const double*, const double*, std::size_t, std::size_t, double*);
};

extern const Vtable scalar_vtable;

void powlaw_scalar(const double* y, std::size_t n, std::size_t dim, double h,
                   double alpha, double* out);
void decay_update_scalar(double* accum, const double* decay, const double* push,
                         const double* x, std::size_t terms, std::size_t dim);
void term_sum_scalar(const double* accum, const double* w, std::size_t terms,
                     std::size_t dim, double* out);

#if defined(FRACSDE_HAVE_AVX2_TU)
extern const Vtable avx2_vtable;
#endif

}  // namespace fracsde::kernels::detail
